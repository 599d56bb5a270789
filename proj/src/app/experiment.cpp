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

#include "qtrader/app/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "qtrader/a3c/evaluate.hpp"
#include "qtrader/a3c/trainer.hpp"
#include "qtrader/app/plots.hpp"
#include "qtrader/app/synthetic.hpp"
#include "qtrader/common/csv.hpp"
#include "qtrader/diffnet/serialize.hpp"

namespace qtrader::app {

namespace fs = std::filesystem;

StageError::StageError(std::string stage, const std::string &cause)
    : Error(fmt::format("stage '{}' failed: {}", stage, cause)), stage_(std::move(stage)) {}

namespace {

/// Runs one stage, rewrapping failures with the stage name. Configuration problems stay
/// ConfigErrors so the caller can tell them apart from runtime failures.
template <typename Fn> auto stage(std::string_view name, Fn &&fn) -> decltype(fn()) {
    spdlog::debug("stage {}", name);
    try {
        return fn();
    } catch (const StageError &) {
        throw;
    } catch (const ConfigError &e) {
        throw ConfigError(fmt::format("stage '{}': {}", name, e.what()));
    } catch (const std::exception &e) {
        throw StageError(std::string(name), e.what());
    }
}

/// Tracks files written into an output directory and deletes them unless committed.
class ArtifactSet {
  public:
    explicit ArtifactSet(fs::path dir) : dir_(std::move(dir)) {
        created_dir_ = !fs::exists(dir_);
        fs::create_directories(dir_);
    }
    ArtifactSet(const ArtifactSet &) = delete;
    ArtifactSet &operator=(const ArtifactSet &) = delete;
    ~ArtifactSet() {
        if (committed_) {
            return;
        }
        std::error_code ec;
        for (const auto &f : files_) {
            fs::remove(f, ec);
        }
        if (created_dir_ && fs::is_empty(dir_, ec)) {
            fs::remove(dir_, ec);
        }
    }

    template <typename Fn> void text(const std::string &name, Fn &&fn) {
        const auto path = dir_ / name;
        track(path);
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw Error(fmt::format("cannot write '{}'", path.string()));
        }
        fn(out);
        if (!out) {
            throw Error(fmt::format("write to '{}' failed", path.string()));
        }
    }
    void track(const fs::path &path) {
        if (std::find(files_.begin(), files_.end(), path) == files_.end()) {
            files_.push_back(path);
        }
    }
    [[nodiscard]] const fs::path &dir() const { return dir_; }
    std::vector<fs::path> commit() {
        committed_ = true;
        return files_;
    }

  private:
    fs::path dir_;
    std::vector<fs::path> files_;
    bool created_dir_ = false;
    bool committed_ = false;
};

std::string strategy_label(Strategy strategy, bool use_forecast) {
    std::string label = strategy == Strategy::classical ? "Classical A3C"
                        : strategy == Strategy::quantum ? "Quantum A3C"
                                                        : "Random";
    if (use_forecast && strategy != Strategy::random) {
        label += " + LSTM";
    }
    return label;
}

a3c::NetConfig net_config(const ExperimentConfig &config, std::size_t observation_size) {
    return {observation_size, config.strategy == Strategy::quantum ? a3c::HeadKind::quantum : a3c::HeadKind::classical,
            config.train.latent, config.train.depth, tradeenv::kActionCount};
}

metrics::MetricsReport compute_metrics(const a3c::EvaluationRun &run) {
    const metrics::EquityCurve curve{run.dates(), run.asset_history()};
    const metrics::TradeLog log{run.trades, run.position_flags()};
    return metrics::summary_metrics(curve, log);
}

void write_metrics(ArtifactSet &set, const metrics::MetricsReport &report, std::string_view title,
                   std::string_view stamp) {
    set.text("metrics.csv", [&](std::ostream &o) { metrics::write_report_csv(o, report, stamp); });
    set.text("metrics.txt", [&](std::ostream &o) {
        if (!stamp.empty()) {
            o << "# " << stamp << "\n";
        }
        metrics::write_report_text(o, report, title);
    });
}

void write_plots(ArtifactSet &set, bool with_history, std::string_view stamp) {
    // Track the SVG names first so a failure halfway still cleans them up.
    if (with_history) {
        set.track(set.dir() / "reward_curve.svg");
    }
    set.track(set.dir() / "action_timeline.svg");
    set.track(set.dir() / "equity_curve.svg");
    emit_plots(set.dir(), with_history, stamp);
}

void write_forecast_csv(std::ostream &out, std::span<const tradeenv::DatedValue> forecasts, std::string_view stamp) {
    if (!stamp.empty()) {
        out << "# " << stamp << '\n';
    }
    out << "date,forecast\n";
    for (const auto &f : forecasts) {
        out << f.date.iso() << ',' << format_number(f.value) << '\n';
    }
}

void write_forecast_evaluation(std::ostream &out, const ForecastStage &fs, std::string_view stamp) {
    if (!stamp.empty()) {
        out << "# " << stamp << '\n';
    }
    if (!fs.evaluation) {
        out << "held-out evaluation unavailable: " << fs.evaluation_note << '\n';
        return;
    }
    out << fmt::format("rmse_pct             {:.6f}\n", fs.evaluation->rmse);
    out << fmt::format("pearson              {:.6f}\n", fs.evaluation->pearson);
    out << fmt::format("directional_accuracy {:.6f}\n", fs.evaluation->directional_accuracy);
}

struct Prepared {
    std::shared_ptr<const tradeenv::MarketSeries> series;
    std::optional<ForecastStage> forecast;
};

tradeenv::MarketSeries attach(const ExperimentConfig &config, const tradeenv::MarketSeries &normalized,
                              const ForecastStage &fs) {
    (void)config;
    return tradeenv::attach_forecast(normalized, fs.forecasts);
}

std::vector<tradeenv::DatedValue> apply_mode(const ExperimentConfig &config, std::vector<tradeenv::DatedValue> values) {
    if (config.forecast_mode == ForecastMode::direction) {
        for (auto &v : values) {
            v.value = v.value > 0.0 ? 1.0 : (v.value < 0.0 ? -1.0 : 0.0);
        }
    }
    return values;
}

/// Ingest and normalize; with `forecast_checkpoint` the forecaster is loaded instead of trained.
Prepared prepare(const ExperimentConfig &config, const std::optional<fs::path> &forecast_checkpoint = {}) {
    Prepared p;
    auto normalized = stage("ingest", [&] { return tradeenv::zscore(load_dataset(config), config.train_fraction); });
    if (config.use_forecast) {
        p.forecast = stage("forecast", [&] {
            if (!forecast_checkpoint) {
                return run_forecaster(config, normalized);
            }
            const auto fc = config.resolved_forecaster();
            ForecastStage fs;
            fs.model = forecaster::ForecastModel(normalized.feature_count() + 1, fc.lookback, fc.hidden);
            diffnet::load_parameters(*forecast_checkpoint, fs.model.checkpoint_parameters());
            fs.forecasts = apply_mode(config, forecaster::forecast_series(fs.model, normalized));
            fs.evaluation_note = "loaded from checkpoint";
            return fs;
        });
        normalized = stage("forecast", [&] { return attach(config, normalized, *p.forecast); });
    }
    p.series = std::make_shared<const tradeenv::MarketSeries>(std::move(normalized));
    return p;
}

} // namespace

tradeenv::MarketSeries load_dataset(const ExperimentConfig &config) {
    if (config.data_path) {
        return tradeenv::load_market_csv(*config.data_path);
    }
    if (config.synthetic) {
        return generate_synthetic(*config.synthetic);
    }
    throw ConfigError("no data source configured");
}

ForecastStage run_forecaster(const ExperimentConfig &config, const tradeenv::MarketSeries &normalized) {
    const auto fc = config.resolved_forecaster();
    const auto dataset = forecaster::build_windows(normalized, fc.lookback);
    ForecastStage out;
    out.model = forecaster::train_forecaster(dataset, fc);
    const auto validation = dataset.validation();
    if (validation.empty()) {
        out.evaluation_note = "no held-out windows (train_fraction covers the whole series)";
    } else {
        std::vector<double> preds;
        std::vector<double> actuals;
        for (const auto &w : validation) {
            preds.push_back(forecaster::predict(out.model, w.inputs));
            actuals.push_back(w.target);
        }
        try {
            out.evaluation = forecaster::evaluate_forecasts(preds, actuals);
        } catch (const EvaluationError &e) {
            out.evaluation_note = e.what();
            spdlog::warn("forecaster evaluation: {}", e.what());
        }
    }
    out.forecasts = apply_mode(config, forecaster::forecast_series(out.model, normalized));
    return out;
}

RunArtifacts run_experiment(const ExperimentConfig &config) {
    config.validate();
    const std::string stamp = artifact_stamp(config);
    const std::string label = strategy_label(config.strategy, config.use_forecast);
    spdlog::info("running {} into {}", label, config.output_dir.string());

    auto prepared = prepare(config);
    const auto series = prepared.series;
    const tradeenv::TradingEnv probe(series, config.env);
    const auto nc = net_config(config, probe.observation_size());

    std::optional<a3c::TrainingResult> trained;
    if (config.strategy != Strategy::random) {
        trained = stage("train", [&] {
            return a3c::train(
                config.resolved_train(), [&](std::size_t) { return tradeenv::TradingEnv(series, config.env); },
                [&] { return a3c::ActorCriticNet(nc); });
        });
        spdlog::info("trained {} episodes, {} updates ({} rejected)", trained->history.rewards.size(), trained->updates,
                     trained->rejected_updates);
    }

    std::optional<a3c::ActorCriticNet> net;
    const auto run = stage("evaluate", [&] {
        tradeenv::TradingEnv env(series, config.env);
        if (!trained) {
            return a3c::evaluate_random(env, config.seed);
        }
        net.emplace(nc);
        net->set_flat_parameters(trained->parameters);
        return a3c::evaluate_policy(*net, env);
    });
    const auto report = stage("metrics", [&] { return compute_metrics(run); });

    RunArtifacts artifacts;
    artifacts.directory = config.output_dir;
    artifacts.metrics = report;
    if (prepared.forecast) {
        artifacts.forecast_evaluation = prepared.forecast->evaluation;
    }
    stage("artifacts", [&] {
        ArtifactSet set(config.output_dir);
        set.text("config.ini", [&](std::ostream &o) {
            o << "; " << stamp << '\n';
            write_config(o, config);
        });
        if (trained) {
            set.text("training_history.csv",
                     [&](std::ostream &o) { a3c::write_history_csv(o, trained->history, stamp); });
            set.text("checkpoint.bin", [&](std::ostream &o) { diffnet::write_parameters(o, diffnet::as_const(net->parameters())); });
        }
        if (prepared.forecast) {
            set.text("forecast.csv", [&](std::ostream &o) { write_forecast_csv(o, prepared.forecast->forecasts, stamp); });
            set.text("forecast_evaluation.txt",
                     [&](std::ostream &o) { write_forecast_evaluation(o, *prepared.forecast, stamp); });
            set.text("forecaster.bin", [&](std::ostream &o) {
                diffnet::write_parameters(o, diffnet::as_const(prepared.forecast->model.checkpoint_parameters()));
            });
        }
        set.text("evaluation.csv", [&](std::ostream &o) { a3c::write_evaluation_csv(o, run, stamp); });
        write_metrics(set, report, label, stamp);
        write_plots(set, trained.has_value(), stamp);
        artifacts.files = set.commit();
    });
    spdlog::info("{}: cumulative return {}, {} trades", label,
                 metrics::format_display(report.cumulative_return, 100.0) + "%", report.trade_count);
    return artifacts;
}

RunArtifacts run_forecast(const ExperimentConfig &config) {
    config.validate();
    const std::string stamp = artifact_stamp(config);
    auto normalized = stage("ingest", [&] { return tradeenv::zscore(load_dataset(config), config.train_fraction); });
    const auto fs = stage("forecast", [&] { return run_forecaster(config, normalized); });
    RunArtifacts artifacts;
    artifacts.directory = config.output_dir;
    artifacts.forecast_evaluation = fs.evaluation;
    stage("artifacts", [&] {
        const auto raw = load_dataset(config);
        const auto with_forecast = tradeenv::attach_forecast(raw, fs.forecasts);
        ArtifactSet set(config.output_dir);
        set.text("forecast.csv", [&](std::ostream &o) {
            o << "# " << stamp << '\n';
            tradeenv::write_market_csv(o, with_forecast);
        });
        set.text("forecast_evaluation.txt", [&](std::ostream &o) { write_forecast_evaluation(o, fs, stamp); });
        set.text("forecaster.bin", [&](std::ostream &o) {
            auto model = fs.model;
            diffnet::write_parameters(o, diffnet::as_const(model.checkpoint_parameters()));
        });
        artifacts.files = set.commit();
    });
    return artifacts;
}

RunArtifacts evaluate_checkpoint(const ExperimentConfig &config) {
    config.validate();
    const std::string stamp = artifact_stamp(config);
    const std::string label = strategy_label(config.strategy, config.use_forecast);
    const fs::path dir = config.output_dir;
    std::optional<fs::path> forecast_ckpt;
    if (config.use_forecast) {
        forecast_ckpt = dir / "forecaster.bin";
        if (!fs::exists(*forecast_ckpt)) {
            throw StageError("evaluate", fmt::format("missing forecaster checkpoint '{}'", forecast_ckpt->string()));
        }
    }
    auto prepared = prepare(config, forecast_ckpt);
    const auto run = stage("evaluate", [&] {
        tradeenv::TradingEnv env(prepared.series, config.env);
        if (config.strategy == Strategy::random) {
            return a3c::evaluate_random(env, config.seed);
        }
        a3c::ActorCriticNet net(net_config(config, env.observation_size()));
        diffnet::load_parameters(dir / "checkpoint.bin", net.parameters());
        return a3c::evaluate_policy(net, env);
    });
    const auto report = stage("metrics", [&] { return compute_metrics(run); });
    RunArtifacts artifacts;
    artifacts.directory = dir;
    artifacts.metrics = report;
    stage("artifacts", [&] {
        ArtifactSet set(dir);
        set.text("evaluation.csv", [&](std::ostream &o) { a3c::write_evaluation_csv(o, run, stamp); });
        write_metrics(set, report, label, stamp);
        write_plots(set, fs::exists(dir / "training_history.csv"), stamp);
        artifacts.files = set.commit();
    });
    return artifacts;
}

RunArtifacts regenerate_report(const fs::path &dir, double initial_cash, std::string_view stamp) {
    const auto run = stage("report", [&] {
        std::ifstream in(dir / "evaluation.csv");
        if (!in) {
            throw UsageError(fmt::format("missing CSV '{}'", (dir / "evaluation.csv").string()));
        }
        return a3c::read_evaluation_csv(in, initial_cash);
    });
    const auto report = stage("metrics", [&] { return compute_metrics(run); });
    RunArtifacts artifacts;
    artifacts.directory = dir;
    artifacts.metrics = report;
    stage("artifacts", [&] {
        ArtifactSet set(dir);
        write_metrics(set, report, dir.filename().string(), stamp);
        write_plots(set, fs::exists(dir / "training_history.csv"), stamp);
        artifacts.files = set.commit();
    });
    return artifacts;
}

std::vector<StrategySpec> default_strategies() {
    return {
        {"Classical A3C", "classical", Strategy::classical, false},
        {"Classical A3C + LSTM", "classical-lstm", Strategy::classical, true},
        {"Quantum A3C", "quantum", Strategy::quantum, false},
        {"Quantum A3C + LSTM", "quantum-lstm", Strategy::quantum, true},
        {"Random", "random", Strategy::random, false},
    };
}

StrategySpec parse_strategy_spec(std::string_view text) {
    for (const auto &s : default_strategies()) {
        if (text == s.slug || (text.ends_with("+lstm") && s.use_forecast &&
                               text.substr(0, text.size() - 5) == to_string(s.strategy))) {
            return s;
        }
    }
    throw ConfigError(fmt::format(
        "unknown strategy '{}' (expected classical, classical+lstm, quantum, quantum+lstm or random)", text));
}

MatrixResult run_matrix(const ExperimentConfig &config, std::span<const StrategySpec> strategies) {
    if (strategies.empty()) {
        throw ConfigError("the matrix needs at least one strategy");
    }
    MatrixResult result;
    for (const auto &s : strategies) {
        ExperimentConfig run = config;
        run.strategy = s.strategy;
        run.use_forecast = s.use_forecast;
        run.output_dir = config.output_dir / s.slug;
        metrics::ComparisonColumn column{s.label, std::nullopt, {}};
        try {
            column.report = run_experiment(run).metrics;
        } catch (const Error &e) {
            spdlog::error("{} failed: {}", s.label, e.what());
            column.failure = e.what();
        }
        result.columns.push_back(std::move(column));
    }
    const std::string stamp = artifact_stamp(config);
    fs::create_directories(config.output_dir);
    const auto txt = config.output_dir / "comparison.txt";
    const auto csv = config.output_dir / "comparison.csv";
    {
        std::ofstream out(txt, std::ios::binary);
        out << "# " << stamp << '\n';
        metrics::write_comparison_text(out, result.columns);
    }
    {
        std::ofstream out(csv, std::ios::binary);
        metrics::write_comparison_csv(out, result.columns, stamp);
    }
    result.files = {txt, csv};
    return result;
}

} // namespace qtrader::app
