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

// Straight-line re-derivation of the nineteen report metrics, written without reference to the
// library code: each quantity is computed from first principles with the simplest loop that
// expresses its definition (quadratic scans where they read more clearly). An empty optional means
// "undefined" (a zero denominator).

#include <qtrader/common/date.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using Opt = std::optional<double>;

struct OracleReport {
    Opt time_in_market, cumulative_return, cagr, sharpe, sortino, smart_sharpe, max_drawdown, longest_drawdown_days,
        volatility_ann, calmar, gain_pain, profit_factor, payoff_ratio, tail_ratio, omega, ulcer_index,
        recovery_factor, serenity_index, win_month_pct;
};

inline double mean_of(const std::vector<double> &x) {
    double s = 0;
    for (double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

inline Opt divide(double a, double b) {
    if (b == 0.0) {
        return std::nullopt;
    }
    return a / b;
}

/// Percentile by linear interpolation between closest ranks on the sorted sample.
inline double pct(std::vector<double> x, double p) {
    std::sort(x.begin(), x.end());
    const double rank = p * static_cast<double>(x.size() - 1);
    const auto below = static_cast<std::size_t>(rank);
    if (below + 1 >= x.size()) {
        return x.back();
    }
    const double frac = rank - static_cast<double>(below);
    return x[below] * (1 - frac) + x[below + 1] * frac;
}

inline double running_peak(const std::vector<double> &v, std::size_t t) {
    return *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(t) + 1);
}

inline OracleReport compute(const std::vector<qtrader::Date> &dates, const std::vector<double> &v,
                            const std::vector<bool> &flags, double periods = 52.0) {
    OracleReport o;
    const std::size_t n = v.size();
    std::vector<double> r;
    for (std::size_t i = 1; i < n; ++i) {
        r.push_back(v[i] / v[i - 1] - 1);
    }
    const std::size_t m = r.size();
    const double mu = mean_of(r);

    std::size_t in_market = 0;
    for (bool f : flags) {
        in_market += f ? 1 : 0;
    }
    o.time_in_market = 100.0 * static_cast<double>(in_market) / static_cast<double>(n);
    o.cumulative_return = v.back() / v.front() - 1;
    const auto days = (dates.back().days() - dates.front().days()).count();
    if (days > 0) {
        o.cagr = std::pow(v.back() / v.front(), 365.0 / static_cast<double>(days)) - 1;
    }

    // A single return leaves every ratio row undefined; only level and drawdown rows remain.
    if (m >= 2) {
        double var = 0;
        for (double x : r) {
            var += (x - mu) * (x - mu);
        }
        const double sd = std::sqrt(var / static_cast<double>(m - 1));
        o.volatility_ann = sd * std::sqrt(periods);
        if (sd > 0) {
            o.sharpe = mu / sd * std::sqrt(periods);
            const std::size_t big_k = std::min<std::size_t>(m - 2, 20);
            double weighted = 0;
            for (std::size_t k = 1; k <= big_k; ++k) {
                double num = 0;
                for (std::size_t i = k; i < m; ++i) {
                    num += (r[i] - mu) * (r[i - k] - mu);
                }
                weighted += (1.0 - static_cast<double>(k) / static_cast<double>(big_k + 1)) * (num / var);
            }
            double penalty = 1.0 + 2.0 * weighted;
            penalty = penalty > 0 ? std::sqrt(penalty) : 0.0;
            o.smart_sharpe = *o.sharpe / std::max(penalty, 1e-6);
        }
        double downside = 0;
        for (double x : r) {
            downside += std::pow(std::min(x, 0.0), 2);
        }
        downside = std::sqrt(downside / static_cast<double>(m));
        if (downside > 0) {
            o.sortino = mu / downside * std::sqrt(periods);
        }

        double gains = 0, pains = 0, total = 0;
        std::vector<double> wins, losses;
        for (double x : r) {
            total += x;
            gains += std::max(x, 0.0);
            pains += std::min(x, 0.0);
            if (x > 0) {
                wins.push_back(x);
            }
            if (x < 0) {
                losses.push_back(x);
            }
        }
        o.gain_pain = divide(total, std::abs(pains));
        o.profit_factor = divide(gains, std::abs(pains));
        o.omega = o.profit_factor;
        if (!wins.empty() && !losses.empty()) {
            o.payoff_ratio = divide(mean_of(wins), std::abs(mean_of(losses)));
        }
        if (const auto t = divide(pct(r, 0.95), pct(r, 0.05))) {
            o.tail_ratio = std::abs(*t);
        }
    }

    // Drawdowns by rescanning the prefix peak at every step.
    double depth = 0, ulcer_sq = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double pk = running_peak(v, t);
        const double d = (v[t] - pk) / pk;
        depth = std::min(depth, d);
        ulcer_sq += d * d;
    }
    o.max_drawdown = depth;
    const double ulcer = std::sqrt(ulcer_sq / static_cast<double>(n));
    o.ulcer_index = ulcer;
    // Longest drawdown: from each new-high index, walk forward to the first value that meets it.
    long longest = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] < running_peak(v, i)) {
            continue;
        }
        if (i + 1 < n && v[i + 1] >= v[i]) {
            continue; // no drawdown starts here
        }
        std::size_t j = i + 1;
        while (j < n && v[j] < v[i]) {
            ++j;
        }
        const std::size_t end = j < n ? j : n - 1;
        if (end > i) {
            longest = std::max(longest, static_cast<long>((dates[end].days() - dates[i].days()).count()));
        }
    }
    o.longest_drawdown_days = static_cast<double>(longest);

    if (depth < 0) {
        if (o.cagr) {
            o.calmar = *o.cagr / std::abs(depth);
        }
        o.recovery_factor = *o.cumulative_return / std::abs(depth);
    }
    std::vector<double> sorted = r;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t worst_count = std::max<std::size_t>(1, m / 20);
    const double pitfall =
        std::abs(mean_of(std::vector<double>(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(worst_count))));
    if (ulcer > 0 && pitfall > 0) {
        o.serenity_index = *o.cumulative_return / (ulcer * pitfall);
    }

    // Month-end values keyed by (year, month); the first month is measured from the first value.
    std::map<std::pair<int, unsigned>, double> month_end;
    for (std::size_t t = 0; t < n; ++t) {
        const auto ymd = dates[t].ymd();
        month_end[{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())}] = v[t];
    }
    double prev = v.front();
    std::size_t up = 0;
    for (const auto &[key, value] : month_end) {
        up += value > prev ? 1 : 0;
        prev = value;
    }
    o.win_month_pct = 100.0 * static_cast<double>(up) / static_cast<double>(month_end.size());
    return o;
}

} // namespace oracle
