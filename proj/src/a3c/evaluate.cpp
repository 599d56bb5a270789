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

#include "qtrader/a3c/evaluate.hpp"

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "qtrader/common/csv.hpp"
#include "qtrader/common/error.hpp"

namespace qtrader::a3c {

using tradeenv::Action;

std::vector<double> EvaluationRun::asset_history() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto &s : steps) {
        out.push_back(s.asset_value);
    }
    return out;
}

std::vector<Date> EvaluationRun::dates() const {
    std::vector<Date> out;
    out.reserve(steps.size());
    for (const auto &s : steps) {
        out.push_back(s.date);
    }
    return out;
}

std::vector<bool> EvaluationRun::position_flags() const {
    std::vector<bool> out;
    out.reserve(steps.size());
    for (const auto &s : steps) {
        out.push_back(s.long_after);
    }
    return out;
}

double EvaluationRun::realized_profit() const {
    double total = 0.0;
    for (const auto &t : trades) {
        total += t.profit;
    }
    return total;
}

namespace {

/// Pairs buys with the next sell; profit is the asset change between the two rows.
std::vector<Trade> rebuild_trades(const std::vector<EvaluationStep> &steps) {
    std::vector<Trade> trades;
    std::optional<std::size_t> open;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].action == Action::buy) {
            open = i;
        } else if (steps[i].action == Action::sell && open) {
            const auto &b = steps[*open];
            trades.push_back({b.date, b.price, steps[i].date, steps[i].price, steps[i].asset_value - b.asset_value});
            open.reset();
        }
    }
    return trades;
}

} // namespace

EvaluationRun run_episode(tradeenv::TradingEnv &env, const PolicyFn &policy) {
    EvaluationRun run;
    run.initial_cash = env.config().initial_cash;
    auto obs = env.reset();
    std::optional<std::size_t> open; // step index of the open buy
    while (true) {
        const std::size_t t = env.state().t;
        const auto &row = env.series().row(t);
        auto result = env.step(policy(obs));
        const Action executed = result.info.executed_action;
        if (executed == Action::buy) {
            open = run.steps.size();
        } else if (executed == Action::sell && open) {
            const auto &b = run.steps[*open];
            run.trades.push_back({b.date, b.price, row.date, row.close, result.reward});
            open.reset();
        }
        run.steps.push_back({row.date, executed, row.close, result.info.asset_value, env.state().long_position});
        obs = std::move(result.observation);
        if (result.done) {
            break;
        }
    }
    return run;
}

EvaluationRun evaluate_policy(const ActorCriticNet &net, tradeenv::TradingEnv &env) {
    return run_episode(env, [&net](const tradeenv::Observation &obs) {
        return tradeenv::action_from_index(greedy_action(net.policy(obs)));
    });
}

EvaluationRun evaluate_random(tradeenv::TradingEnv &env, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, tradeenv::kActionCount - 1);
    return run_episode(env, [&](const tradeenv::Observation &) { return tradeenv::action_from_index(pick(rng)); });
}

std::vector<double> random_baseline_history(tradeenv::TradingEnv &env, std::size_t episodes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, tradeenv::kActionCount - 1);
    std::vector<double> rewards;
    rewards.reserve(episodes);
    for (std::size_t e = 0; e < episodes; ++e) {
        env.reset();
        double total = 0.0;
        bool done = false;
        while (!done) {
            const auto result = env.step(tradeenv::action_from_index(pick(rng)));
            total += result.reward;
            done = result.done;
        }
        rewards.push_back(total);
    }
    return rewards;
}

void write_evaluation_csv(std::ostream &out, const EvaluationRun &run, std::string_view stamp) {
    if (!stamp.empty()) {
        out << "# " << stamp << '\n';
    }
    out << "date,action,price,asset_value\n";
    for (const auto &s : run.steps) {
        out << s.date.iso() << ',' << tradeenv::to_string(s.action) << ',' << format_number(s.price) << ','
            << format_number(s.asset_value) << '\n';
    }
}

EvaluationRun read_evaluation_csv(std::istream &in, double initial_cash) {
    const auto table = read_csv(in);
    const auto c_date = table.column("date");
    const auto c_action = table.column("action");
    const auto c_price = table.column("price");
    const auto c_asset = table.column("asset_value");
    auto number = [](const std::string &cell, std::size_t line) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
            throw IngestionError(fmt::format("line {}: unparseable number '{}'", line, cell));
        }
        return v;
    };
    EvaluationRun run;
    run.initial_cash = initial_cash;
    bool long_position = false;
    for (const auto &rec : table.records) {
        EvaluationStep s;
        s.date = Date::parse(rec.fields[c_date]);
        const auto &a = rec.fields[c_action];
        if (a == "hold") {
            s.action = Action::hold;
        } else if (a == "buy") {
            s.action = Action::buy;
            long_position = true;
        } else if (a == "sell") {
            s.action = Action::sell;
            long_position = false;
        } else {
            throw IngestionError(fmt::format("line {}: unknown action '{}'", rec.line, a));
        }
        s.price = number(rec.fields[c_price], rec.line);
        s.asset_value = number(rec.fields[c_asset], rec.line);
        s.long_after = long_position;
        run.steps.push_back(s);
    }
    run.trades = rebuild_trades(run.steps);
    return run;
}

} // namespace qtrader::a3c
