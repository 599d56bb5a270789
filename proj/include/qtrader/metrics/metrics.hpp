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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtrader/common/date.hpp"
#include "qtrader/common/trade.hpp"

namespace qtrader::metrics {

/// A metric value or a named reason why it is undefined (never a silent infinity).
class MetricValue {
  public:
    MetricValue() : MetricValue(undefined("not computed")) {}
    static MetricValue of(double v) { return MetricValue(v, {}); }
    static MetricValue undefined(std::string reason) { return MetricValue(0.0, std::move(reason)); }

    [[nodiscard]] bool defined() const { return reason_.empty(); }
    /// Throws EvaluationError when undefined.
    [[nodiscard]] double value() const;
    [[nodiscard]] double value_or(double fallback) const { return defined() ? value_ : fallback; }
    [[nodiscard]] const std::string &reason() const { return reason_; }

  private:
    MetricValue(double v, std::string reason) : value_(v), reason_(std::move(reason)) {}

    double value_;
    std::string reason_;
};

/// Dated asset values, one per step.
struct EquityCurve {
    std::vector<Date> dates;
    std::vector<double> values;
};

/// Completed trades plus the per-step long/flat flags of the same run.
struct TradeLog {
    std::vector<Trade> trades;
    std::vector<bool> long_flags;
};

/// r_i = v_i / v_{i-1} - 1. Throws DataError for fewer than two values or a non-positive value.
std::vector<double> periodic_returns(std::span<const double> values);

struct Drawdown {
    double depth = 0.0;        // min (v - peak) / peak, <= 0
    long longest_days = 0;     // calendar days from a peak to its recovery (or the last date)
};

/// Throws DataError on an empty curve or mismatched dates/values.
Drawdown max_drawdown(const EquityCurve &curve);

struct RatioMetrics {
    MetricValue sharpe;
    MetricValue sortino;
    MetricValue smart_sharpe;
    MetricValue volatility_ann;
    MetricValue tail_ratio;
    MetricValue payoff_ratio;
    MetricValue gain_pain;
    MetricValue profit_factor;
    MetricValue omega;
};

/// Ratio metrics of a periodic return series, annualized with `periods_per_year`.
/// Throws DataError for fewer than two returns.
RatioMetrics ratio_metrics(std::span<const double> returns, double periods_per_year = 52.0);

/// Linear-interpolation percentile, p in [0, 1].
double percentile(std::span<const double> values, double p);

struct MetricsReport {
    MetricValue time_in_market;        // percent
    MetricValue cumulative_return;     // fraction
    MetricValue cagr;                  // fraction
    MetricValue sharpe;
    MetricValue sortino;
    MetricValue smart_sharpe;
    MetricValue max_drawdown;          // fraction, <= 0
    MetricValue longest_drawdown_days;
    MetricValue volatility_ann;        // fraction
    MetricValue calmar;
    MetricValue gain_pain;
    MetricValue profit_factor;
    MetricValue payoff_ratio;
    MetricValue tail_ratio;
    MetricValue omega;
    MetricValue ulcer_index;
    MetricValue recovery_factor;
    MetricValue serenity_index;
    MetricValue win_month_pct;         // percent
    std::size_t trade_count = 0;
};

/// Row identity for presenting a report: key, display label, display multiplier.
struct MetricRow {
    std::string_view key;
    std::string_view label;
    double display_scale;
    MetricValue MetricsReport::*field;
};

/// The nineteen metric rows in presentation order (trade_count is reported separately).
std::span<const MetricRow> metric_rows();

/// Full battery over an evaluation run. Throws DataError when curve, dates and flags disagree in length
/// or the curve has fewer than two points.
MetricsReport summary_metrics(const EquityCurve &curve, const TradeLog &log, double periods_per_year = 52.0);

struct TradeBehavior {
    std::size_t trade_count = 0;
    double mean_holding_weeks = 0.0;
    /// holding length in whole weeks -> number of trades
    std::map<long, std::size_t> holding_histogram;
};

TradeBehavior trade_behavior(std::span<const Trade> trades);

} // namespace qtrader::metrics
