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

// Best achievable undiscounted episode profit on a deterministic price path for the one-unit
// long-only market: buy when flat (not on the final row), sell when long, forced liquidation on
// the final row. Two searches are provided: brute force over every action sequence (tiny series)
// and a position-state dynamic program, which the brute force validates.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

inline double sell_value(double price, double buy, double cost) { return price - buy - cost * price; }

/// Enumerates all 3^n action sequences. n <= 12 or so.
inline double brute_force_optimum(const std::vector<double> &prices, double cost) {
    const std::size_t n = prices.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= 3;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        bool is_long = false;
        double buy = 0, profit = 0;
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t a = c % 3;
            c /= 3;
            const bool last = t + 1 == n;
            if (a == 1 && !is_long && !last) {
                is_long = true;
                buy = prices[t];
            } else if (a == 2 && is_long) {
                profit += sell_value(prices[t], buy, cost);
                is_long = false;
            }
            if (last && is_long) {
                profit += sell_value(prices[t], buy, cost);
                is_long = false;
            }
        }
        best = std::max(best, profit);
    }
    return best;
}

/// Dynamic program over (t, flat | long-since-b). Exact for any length.
inline double optimal_profit(const std::vector<double> &prices, double cost) {
    const std::size_t n = prices.size();
    // best[t][b]: best profit from row t onward when long since row b (b = n means flat).
    std::vector<std::vector<double>> best(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t t = n; t-- > 0;) {
        const bool last = t + 1 == n;
        for (std::size_t b = 0; b <= n; ++b) {
            if (b != n && b >= t) {
                continue; // unreachable: a position opened at row b is held from row b + 1
            }
            double v;
            if (b == n) {
                const double hold = last ? 0.0 : best[t + 1][n];
                const double buy = last ? -std::numeric_limits<double>::infinity() : best[t + 1][t];
                v = std::max(hold, buy);
            } else {
                const double sell = sell_value(prices[t], prices[b], cost) + (last ? 0.0 : best[t + 1][n]);
                const double hold = last ? sell : best[t + 1][b];
                v = std::max(sell, hold);
            }
            best[t][b] = v;
        }
    }
    return best[0][n];
}

} // namespace oracle
