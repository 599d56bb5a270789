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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "qtrader/a3c/net.hpp"
#include "qtrader/common/trade.hpp"
#include "qtrader/tradeenv/env.hpp"

namespace qtrader::a3c {

struct EvaluationStep {
    Date date;
    tradeenv::Action action = tradeenv::Action::hold; // executed action
    double price = 0.0;
    double asset_value = 0.0;
    bool long_after = false;
};

struct EvaluationRun {
    double initial_cash = 0.0;
    std::vector<EvaluationStep> steps;
    std::vector<Trade> trades;

    [[nodiscard]] std::vector<double> asset_history() const;
    [[nodiscard]] std::vector<Date> dates() const;
    [[nodiscard]] std::vector<bool> position_flags() const;
    [[nodiscard]] double realized_profit() const;
};

using PolicyFn = std::function<tradeenv::Action(const tradeenv::Observation &)>;

/// Plays one full episode with `policy`, logging every step and completed trade.
EvaluationRun run_episode(tradeenv::TradingEnv &env, const PolicyFn &policy);

/// Greedy (argmax, lowest index on ties) rollout of the trained policy.
EvaluationRun evaluate_policy(const ActorCriticNet &net, tradeenv::TradingEnv &env);

/// Uniform random actions from a seeded generator.
EvaluationRun evaluate_random(tradeenv::TradingEnv &env, std::uint64_t seed);

/// Episodic rewards of `episodes` uniform-random episodes drawn from one seeded stream.
std::vector<double> random_baseline_history(tradeenv::TradingEnv &env, std::size_t episodes, std::uint64_t seed);

/// Columns: date,action,price,asset_value.
void write_evaluation_csv(std::ostream &out, const EvaluationRun &run, std::string_view stamp = {});
/// Inverse of write_evaluation_csv; trades are rebuilt from the action column. Throws IngestionError.
EvaluationRun read_evaluation_csv(std::istream &in, double initial_cash);

} // namespace qtrader::a3c
