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

#include "qtrader/tradeenv/env.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"

namespace qtrader::tradeenv {

std::string_view to_string(Action action) {
    switch (action) {
    case Action::hold:
        return "hold";
    case Action::buy:
        return "buy";
    case Action::sell:
        return "sell";
    }
    return "?";
}

Action action_from_index(std::size_t index) {
    if (index >= kActionCount) {
        throw UsageError(fmt::format("action index {} outside {{0, 1, 2}}", index));
    }
    return static_cast<Action>(index);
}

void EnvConfig::validate() const {
    if (!(trade_cost_rate >= 0.0 && trade_cost_rate < 1.0)) {
        throw ConfigError(fmt::format("trade cost rate must lie in [0, 1), got {}", trade_cost_rate));
    }
    if (!(initial_cash > 0.0) || !std::isfinite(initial_cash)) {
        throw ConfigError(fmt::format("initial cash must be positive, got {}", initial_cash));
    }
}

TradingEnv::TradingEnv(std::shared_ptr<const MarketSeries> series, EnvConfig config)
    : series_(std::move(series)), config_(config) {
    config_.validate();
    if (!series_) {
        throw UsageError("trading environment needs a market series");
    }
    if (!series_->empty() && !series_->normalized()) {
        throw UsageError("trading environment needs a normalized market series");
    }
}

std::size_t TradingEnv::observation_size() const {
    return series_->feature_count() + (config_.include_position_in_state ? 2 : 0);
}

Observation TradingEnv::observe() const {
    const auto features = series_->normalized_row(state_.t);
    Observation obs(features.begin(), features.end());
    if (config_.include_position_in_state) {
        double unrealized = 0.0;
        if (state_.long_position) {
            const double price = series_->row(state_.t).close;
            const double scale = series_->stats().stddev[0] > 0.0 ? series_->stats().stddev[0] : *state_.buy_price;
            unrealized = (price - *state_.buy_price) / scale;
        }
        obs.push_back(state_.long_position ? 1.0 : 0.0);
        obs.push_back(unrealized);
    }
    return obs;
}

double TradingEnv::asset_value() const {
    const double price = series_->row(state_.t).close;
    return state_.balance + (state_.long_position ? price - *state_.buy_price : 0.0);
}

double TradingEnv::sell_reward(double price) const {
    return price - *state_.buy_price - config_.trade_cost_rate * price;
}

Observation TradingEnv::reset() {
    if (series_->empty()) {
        throw UsageError("cannot reset an environment over an empty series");
    }
    state_ = EnvState{};
    state_.balance = config_.initial_cash;
    started_ = true;
    return observe();
}

StepResult TradingEnv::step(Action action) {
    if (!started_) {
        throw UsageError("step called before reset");
    }
    if (state_.done) {
        throw UsageError("step called on a finished episode");
    }
    const double price = series_->row(state_.t).close;
    const bool last = state_.t + 1 == series_->size();
    StepResult result;
    Action executed = Action::hold;
    // A buy on the final row would be liquidated at the same price; it executes as hold.
    if (action == Action::buy && !state_.long_position && !last) {
        state_.long_position = true;
        state_.buy_price = price;
        executed = Action::buy;
    } else if (action == Action::sell && state_.long_position) {
        result.reward = sell_reward(price);
        state_.balance += result.reward;
        state_.long_position = false;
        state_.buy_price.reset();
        executed = Action::sell;
    }

    if (last && state_.long_position) {
        result.reward = sell_reward(price);
        state_.balance += result.reward;
        state_.long_position = false;
        state_.buy_price.reset();
        executed = Action::sell;
        result.info.forced_liquidation = true;
    }
    result.info.executed_action = executed;
    result.info.asset_value = asset_value();
    if (last) {
        state_.done = true;
    } else {
        ++state_.t;
    }
    result.done = state_.done;
    result.observation = observe();
    return result;
}

} // namespace qtrader::tradeenv
