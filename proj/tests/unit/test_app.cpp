// Copyright 2026 The qtrader Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <qtrader/app/config.hpp>
#include <qtrader/app/experiment.hpp>
#include <qtrader/app/plots.hpp>
#include <qtrader/app/synthetic.hpp>
#include <qtrader/common/csv.hpp>
#include <qtrader/common/error.hpp>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace qtrader;
using namespace qtrader::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("qtrader_app_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool well_formed_xml(const fs::path &p) {
    try {
        boost::property_tree::ptree tree;
        boost::property_tree::read_xml(p.string(), tree);
        return tree.count("svg") == 1;
    } catch (const std::exception &) {
        return false;
    }
}

std::size_t count_of(const std::string &hay, const std::string &needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + needle.size())) {
        ++n;
    }
    return n;
}

ExperimentConfig small_config(const fs::path &out, std::size_t length = 24) {
    std::istringstream ini("[data]\nsynthetic = sawtooth\nlength = " + std::to_string(length) +
                           "\nperiod = 8\n"
                           "[experiment]\nseed = 3\n"
                           "[train]\nmax_episodes = 30\nworkers = 1\nreward_scale = 0.01\nlatent = 3\n"
                           "[forecaster]\nlookback = 4\nhidden = 4\nepochs = 3\n");
    auto c = parse_config(ini);
    c.output_dir = out;
    return c;
}

std::size_t evaluation_non_hold_rows(const fs::path &csv) {
    std::ifstream in(csv);
    const auto table = read_csv(in);
    const auto col = table.column("action");
    std::size_t n = 0;
    for (const auto &r : table.records) {
        n += r.fields[col] != "hold" ? 1 : 0;
    }
    return n;
}

} // namespace

TEST_CASE("config parsing") {
    std::istringstream ini("[data]\nsynthetic = trend\nlength = 50\n[experiment]\nstrategy = quantum\nseed = 9\n"
                           "use_forecast = true\n[train]\ngamma = 0.95\nworkers = 3\noptimizer = sgd\n"
                           "[env]\ntrade_cost_rate = 0.002\ninclude_position = false\n");
    const auto c = parse_config(ini);
    CHECK(c.synthetic->kind == "trend");
    CHECK(c.synthetic->length == 50);
    CHECK(c.strategy == Strategy::quantum);
    CHECK(c.use_forecast);
    CHECK(c.seed == 9);
    CHECK(c.train.gamma == 0.95);
    CHECK(c.train.n_workers == 3);
    CHECK(c.train.optimizer == diffnet::OptimizerKind::sgd);
    CHECK(c.env.trade_cost_rate == 0.002);
    CHECK_FALSE(c.env.include_position_in_state);
    CHECK(c.resolved_train().seed == 9);
    CHECK(c.resolved_forecaster().seed == 9);

    auto bad = [](const std::string &text) {
        std::istringstream in(text);
        parse_config(in).validate();
    };
    CHECK_THROWS_AS(bad("[data]\nsynthetic = sawtooth\n[bogus]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(bad("[data]\nsynthetic = sawtooth\ncolour = blue\n"), ConfigError);
    CHECK_THROWS_AS(bad("[data]\nsynthetic = sawtooth\n[train]\ngamma = abc\n"), ConfigError);
    CHECK_THROWS_AS(bad("[data]\nsynthetic = sawtooth\n[experiment]\nstrategy = magic\n"), ConfigError);
    CHECK_THROWS_AS(bad("[data]\nsynthetic = sawtooth\n[experiment]\nuse_forecast = maybe\n"), ConfigError);
    CHECK_THROWS_AS(bad("[experiment]\nseed = 1\n"), ConfigError);
    CHECK_THROWS_AS(bad("[data]\nsynthetic = sawtooth\npath = x.csv\n"), ConfigError);
    CHECK_THROWS_AS(bad("[data]\nsynthetic = sawtooth\nlength = 5\n"), ConfigError);
    CHECK_THROWS_AS(bad("[data]\nsynthetic = spiral\n"), ConfigError);
    CHECK_THROWS_AS(bad("[data\nsynthetic = sawtooth\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/qtrader.ini"), ConfigError);
}

TEST_CASE("config write/parse round trip and hashing") {
    auto c = small_config("/tmp/x");
    std::ostringstream out;
    write_config(out, c);
    std::istringstream back(out.str());
    const auto d = parse_config(back);
    CHECK(config_hash(c) == config_hash(d));
    auto moved = c;
    moved.output_dir = "/elsewhere";
    CHECK(config_hash(moved) == config_hash(c));
    auto reseeded = c;
    reseeded.seed = 4;
    CHECK(config_hash(reseeded) != config_hash(c));
    const auto stamp = artifact_stamp(c);
    CHECK(stamp.rfind("config_hash=", 0) == 0);
    CHECK(stamp.find(" seed=3") != std::string::npos);
    CHECK(config_hash(c).size() == 16);
}

TEST_CASE("synthetic generator") {
    SyntheticSpec spec;
    spec.length = 120;
    spec.period = 8;
    const auto s = generate_synthetic(spec);
    REQUIRE(s.size() == 120);
    for (std::size_t t = 8; t < 120; ++t) {
        CHECK(s.row(t).close == s.row(t - 8).close);
        CHECK(s.row(t).date > s.row(t - 1).date);
    }
    // Falling ramp: a jump at the start of each period then a linear decline.
    CHECK(s.row(0).close == doctest::Approx(4400));
    CHECK(s.row(7).close == doctest::Approx(4000));
    spec.ramp = "up";
    const auto up = generate_synthetic(spec);
    CHECK(up.row(0).close == doctest::Approx(4000));
    CHECK(up.row(7).close == doctest::Approx(4400));

    const auto a = scratch("synth_a.csv"), b = scratch("synth_b.csv");
    SyntheticSpec noisy;
    noisy.kind = "white-noise";
    noisy.seed = 17;
    write_synthetic_csv(noisy, a);
    write_synthetic_csv(noisy, b);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("date,close,vix,fedfunds,dgs2,dgs10,hy_spread", 0) == 0);
    const auto reread = tradeenv::load_market_csv(a);
    CHECK(reread.size() == noisy.length);
    fs::remove(a);
    fs::remove(b);

    SyntheticSpec ar;
    ar.kind = "ar1";
    ar.phi = 0.9;
    ar.length = 10000;
    const auto series = generate_synthetic(ar);
    std::vector<double> r;
    for (std::size_t t = 1; t < series.size(); ++t) {
        r.push_back(series.row(t).close / series.row(t - 1).close - 1);
    }
    double m = 0;
    for (double x : r) {
        m += x;
    }
    m /= static_cast<double>(r.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        den += (r[i] - m) * (r[i] - m);
        if (i > 0) {
            num += (r[i] - m) * (r[i - 1] - m);
        }
    }
    const double rho = num / den;
    CHECK(rho >= 0.8);
    CHECK(rho <= 0.95);

    SyntheticSpec trend;
    trend.kind = "trend";
    const auto tr = generate_synthetic(trend);
    for (std::size_t t = 1; t < tr.size(); ++t) {
        CHECK(tr.row(t).close > tr.row(t - 1).close);
    }
    SyntheticSpec bad;
    bad.length = 9;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("plots") {
    a3c::EvaluationRun empty;
    empty.initial_cash = 10000;
    Date d(2022, 1, 7);
    for (int i = 0; i < 5; ++i) {
        empty.steps.push_back({d.plus_days(7 * i), tradeenv::Action::hold, 100.0 + i, 10000, false});
    }
    std::ostringstream svg;
    write_action_timeline_svg(svg, empty, "config_hash=0 seed=1");
    CHECK(count_of(svg.str(), "class=\"marker") == 0);
    CHECK(svg.str().find("<polyline") != std::string::npos);
    CHECK(svg.str().find("config_hash=0 seed=1") != std::string::npos);

    a3c::TrainingHistory h;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0, 1);
    for (int i = 0; i < 3000; ++i) {
        h.rewards.push_back(n(rng));
    }
    h.moving_average = a3c::moving_average(h.rewards, 100);
    const auto path = scratch("reward.svg");
    {
        std::ofstream out(path);
        write_reward_curve_svg(out, h);
    }
    CHECK(well_formed_xml(path));
    fs::remove(path);

    const auto dir = scratch("plots_missing");
    fs::create_directories(dir);
    CHECK_THROWS_AS(emit_plots(dir, false), UsageError);
    fs::remove_all(dir);
}

TEST_CASE("random strategy on a 10-row market skips training") {
    const auto dir = scratch("random10");
    auto c = small_config(dir, 10);
    c.strategy = Strategy::random;
    const auto art = run_experiment(c);
    for (const char *f : {"config.ini", "evaluation.csv", "metrics.csv", "metrics.txt", "action_timeline.svg",
                          "equity_curve.svg"}) {
        CHECK(fs::exists(dir / f));
    }
    CHECK_FALSE(fs::exists(dir / "training_history.csv"));
    CHECK_FALSE(fs::exists(dir / "checkpoint.bin"));
    CHECK(slurp(dir / "config.ini").rfind("; config_hash=", 0) == 0);
    CHECK(art.metrics.cumulative_return.defined());
    fs::remove_all(dir);
}

TEST_CASE("trained run: artifacts, plot consistency and byte-identical reruns") {
    const auto a = scratch("rerun_a"), b = scratch("rerun_b");
    auto c = small_config(a);
    c.use_forecast = true;
    const auto art = run_experiment(c);
    c.output_dir = b;
    run_experiment(c);
    for (const char *f : {"training_history.csv", "evaluation.csv", "metrics.csv", "forecast.csv"}) {
        INFO(f);
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    for (const char *f : {"checkpoint.bin", "forecaster.bin", "forecast_evaluation.txt", "reward_curve.svg"}) {
        CHECK(fs::exists(a / f));
    }
    for (const char *f : {"reward_curve.svg", "action_timeline.svg", "equity_curve.svg"}) {
        INFO(f);
        CHECK(well_formed_xml(a / f));
    }
    CHECK(count_of(slurp(a / "action_timeline.svg"), "class=\"marker") == evaluation_non_hold_rows(a / "evaluation.csv"));
    CHECK(art.files.size() >= 9);

    // Evaluating the saved checkpoint reproduces the evaluation.
    auto eval_cfg = c;
    eval_cfg.output_dir = a;
    const auto before = slurp(a / "evaluation.csv");
    evaluate_checkpoint(eval_cfg);
    CHECK(slurp(a / "evaluation.csv") == before);

    // Report regeneration from the CSV alone.
    fs::remove(a / "metrics.csv");
    regenerate_report(a, c.env.initial_cash, artifact_stamp(c));
    CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("stage failures are named and leave no partial artifacts") {
    const auto dir = scratch("fail");
    auto c = small_config(dir);
    c.synthetic.reset();
    c.data_path = dir / "missing.csv";
    try {
        run_experiment(c);
        FAIL("expected a failure");
    } catch (const StageError &e) {
        CHECK(e.stage() == "ingest");
        CHECK(std::string(e.what()).find("ingest") != std::string::npos);
    } catch (const ConfigError &) {
        // Validation rejected the missing file up front: equally acceptable.
    }
    CHECK_FALSE(fs::exists(dir / "evaluation.csv"));

    const auto eval_dir = scratch("no_checkpoint");
    auto e = small_config(eval_dir);
    CHECK_THROWS_AS(evaluate_checkpoint(e), StageError);
    CHECK_THROWS_AS(regenerate_report(eval_dir, 10000), StageError);
    fs::remove_all(dir);
    fs::remove_all(eval_dir);
}

TEST_CASE("strategy specs") {
    const auto all = default_strategies();
    REQUIRE(all.size() == 5);
    CHECK(all[0].label == "Classical A3C");
    CHECK(all[3].label == "Quantum A3C + LSTM");
    CHECK(all[4].strategy == Strategy::random);
    CHECK(parse_strategy_spec("quantum-lstm").use_forecast);
    CHECK(parse_strategy_spec("classical+lstm").use_forecast);
    CHECK(parse_strategy_spec("random").strategy == Strategy::random);
    CHECK_THROWS_AS(parse_strategy_spec("nope"), ConfigError);
}

TEST_CASE("matrix: single column and failure isolation") {
    const auto dir = scratch("matrix_one");
    auto c = small_config(dir);
    const std::vector<StrategySpec> one{parse_strategy_spec("random")};
    const auto r = run_matrix(c, one);
    REQUIRE(r.columns.size() == 1);
    CHECK(r.columns[0].report.has_value());
    CHECK(slurp(dir / "comparison.csv").find("metric,Random") != std::string::npos);
    fs::remove_all(dir);

    // On a 10-row market the forecaster has no training windows, so only the LSTM columns fail.
    const auto dir2 = scratch("matrix_fail");
    auto short_cfg = small_config(dir2, 10);
    short_cfg.forecaster.lookback = 8;
    const std::vector<StrategySpec> mix{parse_strategy_spec("classical"), parse_strategy_spec("classical-lstm"),
                                        parse_strategy_spec("random")};
    const auto m = run_matrix(short_cfg, mix);
    REQUIRE(m.columns.size() == 3);
    CHECK(m.columns[0].report.has_value());
    CHECK_FALSE(m.columns[1].report.has_value());
    CHECK_FALSE(m.columns[1].failure.empty());
    CHECK(m.columns[2].report.has_value());
    const auto csv = slurp(dir2 / "comparison.csv");
    CHECK(csv.find("failed") != std::string::npos);
    CHECK_FALSE(fs::exists(dir2 / "classical-lstm" / "evaluation.csv"));
    fs::remove_all(dir2);
}
