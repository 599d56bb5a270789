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
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "qtrader/tradeenv/market.hpp"

namespace qtrader::tradeenv {

enum class Action : int { hold = 0, buy = 1, sell = 2 };
inline constexpr std::size_t kActionCount = 3;

std::string_view to_string(Action action);
/// Throws UsageError for integers outside {0, 1, 2}.
Action action_from_index(std::size_t index);

struct EnvConfig {
    double trade_cost_rate = 0.001;
    double initial_cash = 10000.0;
    bool include_position_in_state = true;

    /// Throws ConfigError unless 0 <= trade_cost_rate < 1 and initial_cash is positive.
    void validate() const;
};

struct EnvState {
    std::size_t t = 0;
    bool long_position = false;
    std::optional<double> buy_price;
    double balance = 0.0;
    bool done = false;
};

using Observation = std::vector<double>;

struct StepInfo {
    double asset_value = 0.0;
    Action executed_action = Action::hold;
    /// The episode ended while long and the position was closed at the final price.
    bool forced_liquidation = false;
};

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

/// Episodic long-only trading MDP over a normalized MarketSeries, one index unit per trade.
///
/// Selling while long earns p_t - p_buy - c * p_t and books it into the balance; every other step
/// earns 0. Buy-while-long and sell-while-flat execute as hold. The episode takes exactly
/// series.size() steps; the last step liquidates an open position at the final close.
class TradingEnv {
  public:
    TradingEnv(std::shared_ptr<const MarketSeries> series, EnvConfig config = {});

    /// Throws UsageError on an empty series.
    Observation reset();
    /// Throws UsageError after the episode is done or before reset.
    StepResult step(Action action);

    [[nodiscard]] const EnvState &state() const { return state_; }
    [[nodiscard]] const EnvConfig &config() const { return config_; }
    [[nodiscard]] const MarketSeries &series() const { return *series_; }
    [[nodiscard]] std::size_t observation_size() const;
    [[nodiscard]] Observation observe() const;
    [[nodiscard]] double asset_value() const;

  private:
    double sell_reward(double price) const;

    std::shared_ptr<const MarketSeries> series_;
    EnvConfig config_;
    EnvState state_;
    bool started_ = false;
};

} // namespace qtrader::tradeenv
