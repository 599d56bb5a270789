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

#include "qtrader/metrics/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"

namespace qtrader::metrics {

double MetricValue::value() const {
    if (!defined()) {
        throw EvaluationError(fmt::format("metric undefined: {}", reason_));
    }
    return value_;
}

std::vector<double> periodic_returns(std::span<const double> values) {
    if (values.size() < 2) {
        throw DataError("periodic returns need at least two values");
    }
    std::vector<double> out;
    out.reserve(values.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0)) {
            throw DataError(fmt::format("equity value {} at index {} is not positive", values[i], i));
        }
        if (i > 0) {
            out.push_back(values[i] / values[i - 1] - 1.0);
        }
    }
    return out;
}

Drawdown max_drawdown(const EquityCurve &curve) {
    if (curve.values.empty() || curve.dates.size() != curve.values.size()) {
        throw DataError("drawdown needs a non-empty curve with one date per value");
    }
    Drawdown dd;
    double peak = curve.values[0];
    std::size_t peak_at = 0;
    bool underwater = false;
    for (std::size_t t = 0; t < curve.values.size(); ++t) {
        const double v = curve.values[t];
        if (v >= peak) {
            if (underwater) {
                dd.longest_days = std::max(dd.longest_days, days_between(curve.dates[peak_at], curve.dates[t]));
                underwater = false;
            }
            peak = v;
            peak_at = t;
        } else {
            underwater = true;
            dd.depth = std::min(dd.depth, (v - peak) / peak);
        }
    }
    if (underwater) {
        dd.longest_days = std::max(dd.longest_days, days_between(curve.dates[peak_at], curve.dates.back()));
    }
    return dd;
}

double percentile(std::span<const double> values, double p) {
    if (values.empty()) {
        throw DataError("percentile of an empty series");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

namespace {

MetricValue ratio(double num, double den, std::string_view what) {
    if (den == 0.0 || !std::isfinite(num / den)) {
        return MetricValue::undefined(fmt::format("{} denominator is zero", what));
    }
    return MetricValue::of(num / den);
}

} // namespace

RatioMetrics ratio_metrics(std::span<const double> returns, double periods_per_year) {
    const std::size_t n = returns.size();
    if (n < 2) {
        throw DataError("ratio metrics need at least two returns");
    }
    const double root_p = std::sqrt(periods_per_year);

    double sum = 0.0;
    double pos = 0.0;
    double neg = 0.0;
    double down_sq = 0.0;
    double win_sum = 0.0;
    double loss_sum = 0.0;
    std::size_t wins = 0;
    std::size_t losses = 0;
    for (double r : returns) {
        sum += r;
        if (r > 0.0) {
            pos += r;
            win_sum += r;
            ++wins;
        } else if (r < 0.0) {
            neg += r;
            loss_sum += r;
            ++losses;
            down_sq += r * r;
        }
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double r : returns) {
        ss += (r - mean) * (r - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    RatioMetrics m;
    m.volatility_ann = MetricValue::of(sd * root_p);
    if (sd > 0.0) {
        m.sharpe = MetricValue::of(mean / sd * root_p);
    } else {
        m.sharpe = MetricValue::undefined("sharpe: zero return deviation");
    }
    const double downside = std::sqrt(down_sq / static_cast<double>(n));
    if (downside > 0.0) {
        m.sortino = MetricValue::of(mean / downside * root_p);
    } else {
        m.sortino = MetricValue::undefined("sortino: no negative returns");
    }

    if (m.sharpe.defined()) {
        // Autocorrelation penalty with Bartlett weights over K = min(n - 2, 20) lags.
        const std::size_t lags = std::min<std::size_t>(n - 2, 20);
        double acc = 0.0;
        for (std::size_t k = 1; k <= lags; ++k) {
            double c = 0.0;
            for (std::size_t i = 0; i + k < n; ++i) {
                c += (returns[i] - mean) * (returns[i + k] - mean);
            }
            const double rho = c / ss;
            acc += (1.0 - static_cast<double>(k) / static_cast<double>(lags + 1)) * rho;
        }
        const double penalty = std::max(std::sqrt(std::max(1.0 + 2.0 * acc, 0.0)), 1e-6);
        m.smart_sharpe = MetricValue::of(m.sharpe.value() / penalty);
    } else {
        m.smart_sharpe = MetricValue::undefined("smart sharpe: zero return deviation");
    }

    m.gain_pain = ratio(sum, std::abs(neg), "gain/pain: no losing periods,");
    m.profit_factor = ratio(pos, std::abs(neg), "profit factor: no losing periods,");
    m.omega = m.profit_factor;
    if (wins == 0 || losses == 0) {
        m.payoff_ratio = MetricValue::undefined("payoff ratio: needs both winning and losing periods");
    } else {
        m.payoff_ratio = ratio(win_sum / static_cast<double>(wins), std::abs(loss_sum / static_cast<double>(losses)),
                               "payoff ratio:");
    }
    m.tail_ratio = ratio(percentile(returns, 0.95), percentile(returns, 0.05), "tail ratio: 5th percentile");
    if (m.tail_ratio.defined()) {
        m.tail_ratio = MetricValue::of(std::abs(m.tail_ratio.value()));
    }
    return m;
}

std::span<const MetricRow> metric_rows() {
    static const std::array<MetricRow, 19> rows{{
        {"time_in_market", "Time in Market (%)", 1.0, &MetricsReport::time_in_market},
        {"cumulative_return", "Cumulative Return (%)", 100.0, &MetricsReport::cumulative_return},
        {"cagr", "CAGR (%)", 100.0, &MetricsReport::cagr},
        {"sharpe", "Sharpe Ratio", 1.0, &MetricsReport::sharpe},
        {"sortino", "Sortino Ratio", 1.0, &MetricsReport::sortino},
        {"smart_sharpe", "Smart Sharpe", 1.0, &MetricsReport::smart_sharpe},
        {"max_drawdown", "Max Drawdown (%)", 100.0, &MetricsReport::max_drawdown},
        {"longest_drawdown_days", "Longest Drawdown (days)", 1.0, &MetricsReport::longest_drawdown_days},
        {"volatility_ann", "Volatility (Ann.) (%)", 100.0, &MetricsReport::volatility_ann},
        {"calmar", "Calmar Ratio", 1.0, &MetricsReport::calmar},
        {"gain_pain", "Gain/Pain Ratio", 1.0, &MetricsReport::gain_pain},
        {"profit_factor", "Profit Factor", 1.0, &MetricsReport::profit_factor},
        {"payoff_ratio", "Payoff Ratio", 1.0, &MetricsReport::payoff_ratio},
        {"tail_ratio", "Tail Ratio", 1.0, &MetricsReport::tail_ratio},
        {"omega", "Omega Ratio", 1.0, &MetricsReport::omega},
        {"ulcer_index", "Ulcer Index", 1.0, &MetricsReport::ulcer_index},
        {"recovery_factor", "Recovery Factor", 1.0, &MetricsReport::recovery_factor},
        {"serenity_index", "Serenity Index", 1.0, &MetricsReport::serenity_index},
        {"win_month_pct", "Win Month (%)", 1.0, &MetricsReport::win_month_pct},
    }};
    return rows;
}

namespace {

/// Percent of calendar months whose month-end value beats the previous month-end (the first
/// month compares against the first value of the curve).
double win_month_percent(const EquityCurve &curve) {
    std::vector<double> month_end;
    std::chrono::year_month last_month{};
    for (std::size_t t = 0; t < curve.values.size(); ++t) {
        const auto ymd = curve.dates[t].ymd();
        const std::chrono::year_month ym{ymd.year(), ymd.month()};
        if (month_end.empty() || ym != last_month) {
            month_end.push_back(curve.values[t]);
            last_month = ym;
        } else {
            month_end.back() = curve.values[t];
        }
    }
    std::size_t positive = 0;
    double base = curve.values.front();
    for (double v : month_end) {
        positive += v > base ? 1 : 0;
        base = v;
    }
    return 100.0 * static_cast<double>(positive) / static_cast<double>(month_end.size());
}

} // namespace

MetricsReport summary_metrics(const EquityCurve &curve, const TradeLog &log, double periods_per_year) {
    const std::size_t n = curve.values.size();
    if (n < 2 || curve.dates.size() != n || log.long_flags.size() != n) {
        throw DataError(fmt::format("summary metrics need matching lengths >= 2 (values {}, dates {}, flags {})", n,
                                    curve.dates.size(), log.long_flags.size()));
    }
    const auto returns = periodic_returns(curve.values);
    RatioMetrics ratios;
    if (returns.size() >= 2) {
        ratios = ratio_metrics(returns, periods_per_year);
    } else {
        const auto na = MetricValue::undefined("ratio metrics need at least two returns");
        ratios = {na, na, na, na, na, na, na, na, na};
    }
    const auto dd = max_drawdown(curve);

    MetricsReport r;
    r.trade_count = log.trades.size();
    const auto long_steps = static_cast<double>(std::count(log.long_flags.begin(), log.long_flags.end(), true));
    r.time_in_market = MetricValue::of(100.0 * long_steps / static_cast<double>(n));

    const double growth = curve.values.back() / curve.values.front();
    const double cumulative = growth - 1.0;
    r.cumulative_return = MetricValue::of(cumulative);
    const long span_days = days_between(curve.dates.front(), curve.dates.back());
    if (span_days > 0) {
        r.cagr = MetricValue::of(std::pow(growth, 365.0 / static_cast<double>(span_days)) - 1.0);
    } else {
        r.cagr = MetricValue::undefined("cagr: curve spans zero calendar days");
    }

    r.sharpe = ratios.sharpe;
    r.sortino = ratios.sortino;
    r.smart_sharpe = ratios.smart_sharpe;
    r.volatility_ann = ratios.volatility_ann;
    r.gain_pain = ratios.gain_pain;
    r.profit_factor = ratios.profit_factor;
    r.payoff_ratio = ratios.payoff_ratio;
    r.tail_ratio = ratios.tail_ratio;
    r.omega = ratios.omega;
    r.max_drawdown = MetricValue::of(dd.depth);
    r.longest_drawdown_days = MetricValue::of(static_cast<double>(dd.longest_days));

    double peak = curve.values.front();
    double dd_sq = 0.0;
    for (double v : curve.values) {
        peak = std::max(peak, v);
        const double d = (v - peak) / peak;
        dd_sq += d * d;
    }
    const double ulcer = std::sqrt(dd_sq / static_cast<double>(n));
    r.ulcer_index = MetricValue::of(ulcer);

    const double depth = std::abs(dd.depth);
    if (depth > 0.0) {
        r.calmar = r.cagr.defined() ? MetricValue::of(r.cagr.value() / depth) : r.cagr;
        r.recovery_factor = MetricValue::of(cumulative / depth);
    } else {
        r.calmar = MetricValue::undefined("calmar: no drawdown");
        r.recovery_factor = MetricValue::undefined("recovery factor: no drawdown");
    }

    std::vector<double> sorted = returns;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t tail = std::max<std::size_t>(1, sorted.size() / 20);
    double worst = 0.0;
    for (std::size_t i = 0; i < tail; ++i) {
        worst += sorted[i];
    }
    const double pitfall = std::abs(worst / static_cast<double>(tail));
    if (ulcer > 0.0 && pitfall > 0.0) {
        r.serenity_index = MetricValue::of(cumulative / (ulcer * pitfall));
    } else {
        r.serenity_index = MetricValue::undefined("serenity: zero ulcer index or pitfall");
    }

    r.win_month_pct = MetricValue::of(win_month_percent(curve));
    return r;
}

TradeBehavior trade_behavior(std::span<const Trade> trades) {
    TradeBehavior b;
    b.trade_count = trades.size();
    if (trades.empty()) {
        return b;
    }
    double total_weeks = 0.0;
    for (const auto &t : trades) {
        const double weeks = static_cast<double>(days_between(t.buy_date, t.sell_date)) / 7.0;
        total_weeks += weeks;
        ++b.holding_histogram[std::lround(weeks)];
    }
    b.mean_holding_weeks = total_weeks / static_cast<double>(trades.size());
    return b;
}

} // namespace qtrader::metrics
