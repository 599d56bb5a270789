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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
//
//   qtrader_acceptance [--out DIR] [--only N ...]

#include <oracles/dense_unitary.hpp>
#include <oracles/finite_diff.hpp>
#include <oracles/metrics_oracle.hpp>
#include <oracles/optimal_trading.hpp>
#include <oracles/tape_check.hpp>

#include <qtrader/a3c/evaluate.hpp>
#include <qtrader/a3c/returns.hpp>
#include <qtrader/a3c/trainer.hpp>
#include <qtrader/app/config.hpp>
#include <qtrader/app/experiment.hpp>
#include <qtrader/app/synthetic.hpp>
#include <qtrader/common/csv.hpp>
#include <qtrader/forecaster/forecaster.hpp>
#include <qtrader/metrics/metrics.hpp>
#include <qtrader/qsim/state.hpp>
#include <qtrader/qsim/vqc.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#ifndef QTRADER_CONFIG_DIR
#define QTRADER_CONFIG_DIR "configs"
#endif

using namespace qtrader;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
        }
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [violated]");
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::shared_ptr<const tradeenv::MarketSeries> sawtooth_market() {
    app::SyntheticSpec spec; // 120 rows, period 8, amplitude 10%
    return std::make_shared<tradeenv::MarketSeries>(tradeenv::zscore(app::generate_synthetic(spec), 0.8));
}

// --- 1 ------------------------------------------------------------------------------------------
Outcome quantum_gradients() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi), x(-1, 1);
    double worst = 0;
    for (int rep = 0; rep < 100; ++rep) {
        qsim::VqcParams p(4, 2);
        for (auto &a : p.angles) {
            a = angle(rng);
        }
        std::vector<double> in(4);
        for (auto &v : in) {
            v = x(rng);
        }
        // Full Jacobian: one upstream basis vector per measured qubit.
        for (unsigned q = 0; q < 4; ++q) {
            std::vector<double> up(4, 0.0);
            up[q] = 1.0;
            const auto g = qsim::vqc_gradients(in, p, up);
            auto f = [&] { return qsim::run_vqc(in, p)[q]; };
            const auto fd = oracle::central_gradient(p.angles, f, 1e-5);
            const auto fdx = oracle::central_gradient(in, f, 1e-5);
            for (std::size_t i = 0; i < fd.size(); ++i) {
                worst = std::max(worst, std::abs(fd[i] - g.params[i]));
            }
            for (std::size_t i = 0; i < fdx.size(); ++i) {
                worst = std::max(worst, std::abs(fdx[i] - g.input[i]));
            }
        }
    }
    const double secs = seconds_since(t0);
    o.require(worst < 1e-6, fmt::format("max |shift - fd| = {:.2e} < 1e-6", worst));
    o.require(secs < 10.0, fmt::format("{:.2f} s < 10 s", secs));
    return o;
}

// --- 2 ------------------------------------------------------------------------------------------
Outcome statevector_integrity() {
    Outcome o;
    std::mt19937_64 rng(2002);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    double drift = 0;
    for (unsigned n : {2U, 5U, 8U, 12U}) {
        std::uniform_int_distribution<unsigned> qubit(0, n - 1);
        std::uniform_int_distribution<int> gate(0, 2);
        qsim::QuantumState s(n);
        for (int i = 0; i < 1000; ++i) {
            const unsigned q = qubit(rng);
            switch (gate(rng)) {
            case 0: s.apply_ry(q, angle(rng)); break;
            case 1: s.apply_rz(q, angle(rng)); break;
            default: s.apply_cnot(q, (q + 1) % n); break;
            }
        }
        drift = std::max(drift, std::abs(s.norm_squared() - 1.0));
    }
    o.require(drift < 1e-12, fmt::format("norm drift {:.2e} < 1e-12", drift));

    double worst = 0;
    for (unsigned n = 1; n <= 4; ++n) {
        std::uniform_int_distribution<unsigned> qubit(0, n - 1);
        for (int rep = 0; rep < 20; ++rep) {
            // Random gate list against the dense unitary.
            qsim::QuantumState s(n);
            auto u = oracle::DenseMatrix::identity(std::size_t{1} << n);
            for (int i = 0; i < 40; ++i) {
                const unsigned q = qubit(rng);
                const double th = angle(rng);
                const int g = n == 1 ? i % 2 : i % 3;
                if (g == 0) {
                    s.apply_ry(q, th);
                    u = oracle::multiply(oracle::embed(oracle::ry(th), q, n), u);
                } else if (g == 1) {
                    s.apply_rz(q, th);
                    u = oracle::multiply(oracle::embed(oracle::rz(th), q, n), u);
                } else {
                    s.apply_cnot(q, (q + 1) % n);
                    u = oracle::multiply(oracle::cnot(q, (q + 1) % n, n), u);
                }
            }
            std::vector<oracle::cplx> zero(std::size_t{1} << n);
            zero[0] = 1.0;
            const auto want = oracle::apply(u, zero);
            for (std::size_t i = 0; i < want.size(); ++i) {
                worst = std::max(worst, std::abs(s.amplitudes()[i] - want[i]));
            }
            // The full ansatz.
            qsim::VqcParams p(n, 2);
            for (auto &a : p.angles) {
                a = angle(rng);
            }
            std::vector<double> x(n);
            for (auto &v : x) {
                v = angle(rng) / std::numbers::pi;
            }
            const auto got = qsim::run_vqc(x, p);
            const auto ref = oracle::vqc_expectations(x, p.angles, n, 2);
            for (unsigned q = 0; q < n; ++q) {
                worst = std::max(worst, std::abs(got[q] - ref[q]));
            }
        }
    }
    o.require(worst < 1e-10, fmt::format("dense-oracle deviation {:.2e} < 1e-10 (n<=4)", worst));
    return o;
}

// --- 3 ------------------------------------------------------------------------------------------
Outcome layer_gradients() {
    Outcome o;
    namespace dn = diffnet;
    std::mt19937_64 rng(3003);
    std::normal_distribution<double> nd(0, 1);
    auto vec = [&](std::size_t n) {
        std::vector<double> v(n);
        for (auto &x : v) {
            x = nd(rng);
        }
        return v;
    };
    double dense = 0, tanh_err = 0, soft = 0, lstm = 0, hybrid = 0;
    for (int rep = 0; rep < 50; ++rep) {
        dn::DenseLayer d(5, 4, "d");
        d.init(rng);
        const auto w = vec(4);
        dense = std::max(dense, oracle::check_tape_gradients({&d.weight, &d.bias}, vec(5), [&](dn::Tape &t, dn::Var x) {
                                    return t.sum(t.mul(t.dense(d, x), t.input(w)));
                                }).abs_err);
        tanh_err = std::max(tanh_err, oracle::check_tape_gradients({}, vec(6), [&](dn::Tape &t, dn::Var x) {
                                          return t.sum(t.mul(t.tanh(x), t.input(std::vector<double>(6, 0.7))));
                                      }).abs_err);
        const std::size_t pick = static_cast<std::size_t>(rep) % 3;
        soft = std::max(soft, oracle::check_tape_gradients({}, vec(3), [&](dn::Tape &t, dn::Var x) {
                                  return t.add(t.pick(t.softmax(x), pick), t.pick(t.log_softmax(x), (pick + 1) % 3));
                              }).abs_err);

        dn::LstmCell cell(3, 5);
        cell.init(rng);
        dn::DenseLayer head(5, 1, "head");
        head.init(rng);
        const auto rest = vec(3 * 5);
        lstm = std::max(lstm, oracle::check_tape_gradients({&cell.weight, &cell.bias, &head.weight, &head.bias}, vec(3),
                                                           [&](dn::Tape &t, dn::Var first) {
                                                               dn::Var h = t.input(std::vector<double>(5, 0.0));
                                                               dn::Var c = t.input(std::vector<double>(5, 0.0));
                                                               for (std::size_t s = 0; s < 6; ++s) {
                                                                   const dn::Var xs =
                                                                       s == 0 ? first
                                                                              : t.input(std::span(rest).subspan(
                                                                                    (s - 1) * 3, 3));
                                                                   std::tie(h, c) = t.lstm(cell, xs, h, c);
                                                               }
                                                               return t.square(t.pick(t.dense(head, h), 0));
                                                           })
                                      .rel_err);

        dn::DenseLayer w1(8, 4, "w1"), w2(4, 3, "w2");
        dn::VqcLayer vqc(4, 2);
        w1.init(rng);
        w2.init(rng);
        std::uniform_real_distribution<double> ang(-3, 3);
        for (auto &a : vqc.angles.value) {
            a = ang(rng);
        }
        hybrid = std::max(hybrid, oracle::check_tape_gradients(
                                      {&w1.weight, &w1.bias, &vqc.angles, &w2.weight, &w2.bias}, vec(8),
                                      [&](dn::Tape &t, dn::Var x) {
                                          const auto q = t.tanh(t.vqc(vqc, t.tanh(t.dense(w1, x))));
                                          return t.pick(t.log_softmax(t.dense(w2, q)), pick);
                                      })
                                      .abs_err);
    }
    o.require(dense < 1e-5, fmt::format("dense {:.1e}", dense));
    o.require(tanh_err < 1e-5, fmt::format("tanh {:.1e}", tanh_err));
    o.require(soft < 1e-5, fmt::format("softmax {:.1e}", soft));
    o.require(lstm < 1e-4, fmt::format("lstm/BPTT rel {:.1e}", lstm));
    o.require(hybrid < 1e-5, fmt::format("hybrid head {:.1e}", hybrid));
    return o;
}

// --- 4 ------------------------------------------------------------------------------------------
Outcome environment_accounting() {
    Outcome o;
    std::mt19937_64 rng(4004);
    std::uniform_int_distribution<std::size_t> act(0, 2), len(2, 80);
    std::normal_distribution<double> step(0, 0.03);
    std::size_t identity = 0, sparsity = 0, length = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        const std::size_t n = len(rng);
        std::vector<tradeenv::MarketRow> rows;
        double price = 4000;
        for (std::size_t t = 0; t < n; ++t) {
            tradeenv::MarketRow r;
            r.date = Date(2020, 1, 3).plus_days(7 * static_cast<long>(t));
            r.close = price;
            r.vix = 20 + step(rng) * 100;
            r.fedfunds = 1 + step(rng);
            r.dgs2 = 2 + step(rng);
            r.dgs10 = 3 + step(rng);
            r.hy_spread = 4 + step(rng);
            rows.push_back(r);
            price *= std::exp(step(rng));
        }
        tradeenv::TradingEnv env(std::make_shared<tradeenv::MarketSeries>(
            tradeenv::zscore(tradeenv::MarketSeries(rows), 1.0)));
        env.reset();
        double ledger = env.config().initial_cash, realized = 0;
        std::size_t steps = 0;
        for (bool done = false; !done;) {
            const auto r = env.step(tradeenv::action_from_index(act(rng)));
            ++steps;
            if (r.reward != 0.0 && r.info.executed_action != tradeenv::Action::sell) {
                ++sparsity;
            }
            ledger += r.reward;
            realized += r.reward;
            done = r.done;
        }
        const double bal = env.state().balance;
        const double ulp = std::nextafter(bal, 1e300) - bal;
        if (bal != ledger || std::abs((bal - env.config().initial_cash) - realized) > 4 * ulp * steps) {
            ++identity;
        }
        length += steps != n ? 1 : 0;
    }
    o.require(identity == 0, fmt::format("balance - cash = sum of sell rewards in {}/10000", 10000 - identity));
    o.require(sparsity == 0, fmt::format("rewards off executed sells: {}", sparsity));
    o.require(length == 0, fmt::format("episode-length mismatches: {}", length));
    return o;
}

// --- 5 ------------------------------------------------------------------------------------------
Outcome return_recursion() {
    Outcome o;
    std::mt19937_64 rng(5005);
    std::normal_distribution<double> nd(0, 2);
    std::uniform_real_distribution<double> g(0, 1);
    std::uniform_int_distribution<std::size_t> len(1, 50);
    double worst = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        std::vector<double> r(len(rng));
        for (auto &x : r) {
            x = nd(rng);
        }
        const double v = nd(rng), gamma = g(rng);
        const auto got = a3c::n_step_returns(r, v, gamma);
        for (std::size_t t = 0; t < r.size(); ++t) {
            double s = 0;
            for (std::size_t k = 0; t + k < r.size(); ++k) {
                s += std::pow(gamma, static_cast<double>(k)) * r[t + k];
            }
            s += std::pow(gamma, static_cast<double>(r.size() - t)) * v;
            worst = std::max(worst, std::abs(s - got[t]));
        }
    }
    o.require(worst < 1e-12, fmt::format("fuzzed max error {:.1e} < 1e-12", worst));
    const auto ex = a3c::n_step_returns(std::vector{1.0, 0.0, 0.0}, 2.0, 0.9);
    const bool example = std::abs(ex[0] - 2.458) < 1e-12 && std::abs(ex[1] - 1.62) < 1e-12 && std::abs(ex[2] - 1.8) < 1e-12;
    o.require(example, fmt::format("[1,0,0]/2/0.9 -> [{}, {}, {}]", ex[0], ex[1], ex[2]));
    return o;
}

// --- 6 ------------------------------------------------------------------------------------------
struct LearningRun {
    double mean_last100 = 0;
    double seconds = 0;
};

LearningRun learn(const std::shared_ptr<const tradeenv::MarketSeries> &market, a3c::HeadKind head, unsigned latent) {
    a3c::TrainConfig cfg;
    cfg.gamma = 0.9;
    cfg.update_every = 10;
    cfg.max_episodes = 3000;
    cfg.n_workers = 2;
    cfg.learning_rate = 1e-3;
    cfg.reward_scale = 0.01;
    cfg.seed = 1;
    cfg.head = head;
    cfg.latent = latent;
    cfg.depth = 2;
    const a3c::NetConfig net{8, head, latent, 2, 3};
    const auto t0 = Clock::now();
    const auto result = a3c::train(
        cfg, [&](std::size_t) { return tradeenv::TradingEnv(market); }, [&] { return a3c::ActorCriticNet(net); });
    LearningRun run;
    run.seconds = seconds_since(t0);
    const auto &r = result.history.rewards;
    for (std::size_t i = r.size() - 100; i < r.size(); ++i) {
        run.mean_last100 += r[i] / 100.0;
    }
    return run;
}

Outcome sawtooth_learning() {
    Outcome o;
    const auto market = sawtooth_market();
    std::vector<double> prices;
    for (const auto &row : market->rows()) {
        prices.push_back(row.close);
    }
    const double optimum = oracle::optimal_profit(prices, tradeenv::EnvConfig{}.trade_cost_rate);
    const auto classical = learn(market, a3c::HeadKind::classical, 8);
    o.require(classical.mean_last100 >= 0.9 * optimum,
              fmt::format("classical N=2 last-100 mean {:.1f} = {:.3f} x optimum {:.1f}", classical.mean_last100,
                          classical.mean_last100 / optimum, optimum));
    o.require(classical.seconds < 300, fmt::format("classical {:.1f} s < 300 s", classical.seconds));
    const auto quantum = learn(market, a3c::HeadKind::quantum, 4);
    o.require(quantum.mean_last100 >= 0.75 * optimum,
              fmt::format("quantum n=4 last-100 mean {:.1f} = {:.3f} x optimum", quantum.mean_last100,
                          quantum.mean_last100 / optimum));
    o.require(quantum.seconds < 1200, fmt::format("quantum {:.1f} s < 1200 s", quantum.seconds));
    return o;
}

// --- 7 ------------------------------------------------------------------------------------------
Outcome random_baseline() {
    Outcome o;
    tradeenv::TradingEnv env(sawtooth_market());
    const auto h = a3c::random_baseline_history(env, 3000, 7);
    const auto n = static_cast<double>(h.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        mx += static_cast<double>(i) / n;
        my += h[i] / n;
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        sxx += (static_cast<double>(i) - mx) * (static_cast<double>(i) - mx);
        sxy += (static_cast<double>(i) - mx) * (h[i] - my);
    }
    const double slope = sxy / sxx;
    double ssr = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double e = h[i] - (my + slope * (static_cast<double>(i) - mx));
        ssr += e * e;
    }
    const double se = std::sqrt(ssr / (n - 2) / sxx);
    o.require(std::abs(slope) < 2 * se, fmt::format("slope {:.4f}, 2 SE {:.4f}", slope, 2 * se));
    return o;
}

// --- 8 ------------------------------------------------------------------------------------------
Outcome forecaster_accuracy() {
    Outcome o;
    app::SyntheticSpec spec;
    spec.kind = "sine";
    spec.length = 160;
    spec.period = 16;
    spec.amplitude = 0.02;
    const auto series = tradeenv::zscore(app::generate_synthetic(spec), 0.8);
    const auto ds = forecaster::build_windows(series, 8);
    const auto model = forecaster::train_forecaster(ds, forecaster::ForecasterConfig{});
    std::vector<double> pred, actual;
    for (const auto &w : ds.validation()) {
        pred.push_back(forecaster::predict(model, w.inputs));
        actual.push_back(w.target);
    }
    const auto e = forecaster::evaluate_forecasts(pred, actual);
    o.require(e.directional_accuracy >= 0.9,
              fmt::format("held-out directional accuracy {:.3f} on {} windows", e.directional_accuracy, pred.size()));
    const auto a = forecaster::evaluate_forecasts(std::vector{1.0, 2.0}, std::vector{1.0, 4.0});
    const auto b = forecaster::evaluate_forecasts(std::vector{1.0, -2.0, 3.0}, std::vector{1.0, -2.0, 3.0});
    const auto c = forecaster::evaluate_forecasts(std::vector{1.0, -1.0, 2.0}, std::vector{2.0, -3.0, -1.0});
    const bool worked = std::abs(a.rmse - std::sqrt(2.0)) < 1e-15 && std::abs(b.pearson - 1.0) < 1e-15 &&
                        b.directional_accuracy == 1.0 && std::abs(c.directional_accuracy - 2.0 / 3.0) < 1e-15;
    o.require(worked, "rmse/pearson/accuracy worked examples");
    return o;
}

// --- 9 ------------------------------------------------------------------------------------------
Outcome metrics_oracle() {
    Outcome o;
    std::mt19937_64 rng(9009);
    std::normal_distribution<double> step(0.001, 0.02);
    std::bernoulli_distribution flat(0.25), coin(0.5);
    std::uniform_real_distribution<double> scale(0.01, 100);
    std::size_t mismatches = 0, omega_breaks = 0, scale_breaks = 0;
    double worst = 0, worst_scale = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 20 + static_cast<std::size_t>(rep) * 2;
        metrics::EquityCurve curve;
        metrics::TradeLog log;
        double v = 10000;
        for (std::size_t t = 0; t < n; ++t) {
            curve.dates.push_back(Date(2021, 1, 1).plus_days(7 * static_cast<long>(t)));
            curve.values.push_back(v);
            log.long_flags.push_back(coin(rng));
            v = flat(rng) ? v : v * std::exp(step(rng));
        }
        const auto got = metrics::summary_metrics(curve, log);
        const auto want = oracle::compute(curve.dates, curve.values, log.long_flags);
        const oracle::Opt oracle::OracleReport::*fields[] = {
            &oracle::OracleReport::time_in_market, &oracle::OracleReport::cumulative_return,
            &oracle::OracleReport::cagr,           &oracle::OracleReport::sharpe,
            &oracle::OracleReport::sortino,        &oracle::OracleReport::smart_sharpe,
            &oracle::OracleReport::max_drawdown,   &oracle::OracleReport::longest_drawdown_days,
            &oracle::OracleReport::volatility_ann, &oracle::OracleReport::calmar,
            &oracle::OracleReport::gain_pain,      &oracle::OracleReport::profit_factor,
            &oracle::OracleReport::payoff_ratio,   &oracle::OracleReport::tail_ratio,
            &oracle::OracleReport::omega,          &oracle::OracleReport::ulcer_index,
            &oracle::OracleReport::recovery_factor, &oracle::OracleReport::serenity_index,
            &oracle::OracleReport::win_month_pct};
        const auto rows = metrics::metric_rows();
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto &g = got.*(rows[k].field);
            const auto &w = want.*(fields[k]);
            if (g.defined() != w.has_value()) {
                ++mismatches;
            } else if (w) {
                const double err = std::abs(g.value() - *w) / std::max(1.0, std::abs(*w));
                worst = std::max(worst, err);
                mismatches += err > 1e-9 ? 1 : 0;
            }
        }
        if (got.omega.defined() != got.profit_factor.defined() ||
            (got.omega.defined() && got.omega.value() != got.profit_factor.value())) {
            ++omega_breaks;
        }
        auto scaled = curve;
        const double c = scale(rng);
        for (auto &x : scaled.values) {
            x *= c;
        }
        const auto s = metrics::summary_metrics(scaled, log);
        for (const auto &row : rows) {
            const auto &a = got.*(row.field);
            const auto &b = s.*(row.field);
            if (a.defined() != b.defined()) {
                ++scale_breaks;
            } else if (a.defined()) {
                const double err = std::abs(a.value() - b.value()) / std::max(1.0, std::abs(a.value()));
                worst_scale = std::max(worst_scale, err);
                scale_breaks += err > 1e-12 ? 1 : 0;
            }
        }
    }
    o.require(mismatches == 0, fmt::format("19 metrics x 100 curves vs oracle, max error {:.1e}", worst));
    o.require(omega_breaks == 0, "omega == profit_factor");
    o.require(scale_breaks == 0, fmt::format("scale invariance, max change {:.1e}", worst_scale));
    return o;
}

// --- 10 -----------------------------------------------------------------------------------------
Outcome reproducibility(const fs::path &out) {
    Outcome o;
    struct Case {
        const char *name;
        app::Strategy strategy;
        bool forecast;
        std::size_t episodes;
        unsigned latent;
    };
    const Case cases[] = {{"classical-lstm", app::Strategy::classical, true, 300, 8},
                          {"quantum", app::Strategy::quantum, false, 60, 4},
                          {"random", app::Strategy::random, false, 0, 8}};
    for (const auto &c : cases) {
        app::ExperimentConfig cfg;
        cfg.synthetic = app::SyntheticSpec{};
        cfg.strategy = c.strategy;
        cfg.use_forecast = c.forecast;
        cfg.seed = 11;
        cfg.train.n_workers = 1;
        cfg.train.max_episodes = std::max<std::size_t>(c.episodes, 1);
        cfg.train.reward_scale = 0.01;
        cfg.train.latent = c.latent;
        cfg.forecaster.epochs = 30;
        std::set<std::string> csvs;
        bool identical = true;
        for (const char *run : {"a", "b"}) {
            cfg.output_dir = out / "repro" / c.name / run;
            fs::remove_all(cfg.output_dir);
            for (const auto &f : app::run_experiment(cfg).files) {
                if (f.extension() == ".csv") {
                    csvs.insert(f.filename().string());
                }
            }
        }
        for (const auto &f : csvs) {
            identical = identical && read_file(out / "repro" / c.name / "a" / f) == read_file(out / "repro" / c.name / "b" / f);
        }
        o.require(identical && !csvs.empty(), fmt::format("{}: {} CSV artifacts byte-identical", c.name, csvs.size()));
    }
    return o;
}

// --- 11 -----------------------------------------------------------------------------------------
Outcome experiment_matrix(const fs::path &out) {
    Outcome o;
    auto cfg = app::load_config(fs::path(QTRADER_CONFIG_DIR) / "sawtooth.ini");
    cfg.output_dir = out / "matrix";
    fs::remove_all(cfg.output_dir);
    cfg.validate();
    const auto t0 = Clock::now();
    const auto specs = app::default_strategies();
    const auto result = app::run_matrix(cfg, specs);
    const double secs = seconds_since(t0);
    std::size_t failed = 0;
    for (const auto &c : result.columns) {
        failed += c.report ? 0 : 1;
    }
    o.require(result.columns.size() == 5, fmt::format("{} columns", result.columns.size()));
    o.require(failed == 0, fmt::format("{} failed columns", failed));

    std::ifstream in(cfg.output_dir / "comparison.csv");
    const auto table = read_csv(in);
    o.require(table.header.size() == 6 && table.records.size() == 20,
              fmt::format("comparison.csv {} metric rows x {} strategy columns", table.records.size(),
                          table.header.size() - 1));
    o.require(secs < 1800, fmt::format("{:.0f} s < 1800 s", secs));
    for (const auto &c : result.columns) {
        if (c.report) {
            o.detail += fmt::format("; {} trades={}", c.name, c.report->trade_count);
        }
    }
    return o;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App cli{"qtrader acceptance criteria"};
    std::string out = "acceptance_runs";
    std::vector<int> only;
    cli.add_option("--out", out, "scratch directory for experiment artifacts");
    cli.add_option("--only", only, "run only these criteria");
    CLI11_PARSE(cli, argc, argv);
    spdlog::set_level(spdlog::level::warn);

    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"quantum gradient correctness", quantum_gradients},
        {"statevector integrity", statevector_integrity},
        {"differentiable-layer correctness", layer_gradients},
        {"environment accounting", environment_accounting},
        {"return recursion", return_recursion},
        {"learning at desk scale", sawtooth_learning},
        {"random baseline", random_baseline},
        {"forecaster", forecaster_accuracy},
        {"metrics oracle", metrics_oracle},
        {"reproducibility", [&] { return reproducibility(out); }},
        {"end-to-end matrix", [&] { return experiment_matrix(out); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) {
            continue;
        }
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = fmt::format("threw: {}", e.what());
        }
        failures += o.pass ? 0 : 1;
        fmt::print("{} criterion {}: {} ({}) [{:.1f} s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail,
                   seconds_since(t0));
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
