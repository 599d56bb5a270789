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

#include "qtrader/app/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qtrader/common/date.hpp"

namespace qtrader::app {

namespace {

std::vector<double> closes(const SyntheticSpec &s, std::mt19937_64 &rng) {
    std::vector<double> c(s.length);
    const auto period = static_cast<double>(s.period - 1);
    std::normal_distribution<double> noise(0.0, 1.0);
    double price = s.base;
    double prev_r = s.drift;
    for (std::size_t t = 0; t < s.length; ++t) {
        const double phase = static_cast<double>(t % s.period);
        if (s.kind == "sawtooth") {
            const double x = s.ramp == "up" ? phase / period : (period - phase) / period;
            c[t] = s.base * (1.0 + s.amplitude * x);
            continue;
        }
        if (s.kind == "trend") {
            c[t] = s.base * (1.0 + s.drift * static_cast<double>(t));
            continue;
        }
        if (t > 0) {
            double r = 0.0;
            if (s.kind == "white-noise") {
                r = s.drift + s.volatility * noise(rng);
            } else if (s.kind == "ar1") {
                r = s.drift + s.phi * (prev_r - s.drift) + s.volatility * noise(rng);
            } else { // sine; the quarter-period offset keeps every return away from zero
                r = s.amplitude *
                    std::sin(2.0 * std::numbers::pi * (static_cast<double>(t) + 0.25) / static_cast<double>(s.period));
            }
            prev_r = r;
            price *= 1.0 + r;
        }
        c[t] = price;
    }
    return c;
}

} // namespace

tradeenv::MarketSeries generate_synthetic(const SyntheticSpec &spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    const auto close = closes(spec, rng);
    const bool noisy = spec.kind == "white-noise" || spec.kind == "ar1";

    std::normal_distribution<double> step(0.0, 1.0);
    double vix = 20.0;
    double fedfunds = 2.0;
    double dgs2 = 2.5;
    double dgs10 = 3.0;
    double hy = 4.0;
    const Date start = Date::parse(spec.start);
    std::vector<tradeenv::MarketRow> rows;
    rows.reserve(spec.length);
    for (std::size_t t = 0; t < spec.length; ++t) {
        if (noisy && t > 0) {
            vix = std::max(5.0, vix + 0.8 * step(rng));
            fedfunds = std::max(0.0, fedfunds + 0.02 * step(rng));
            dgs2 = std::max(0.0, dgs2 + 0.05 * step(rng));
            dgs10 = std::max(0.0, dgs10 + 0.04 * step(rng));
            hy = std::max(1.0, hy + 0.05 * step(rng));
        }
        tradeenv::MarketRow row;
        row.date = start.plus_days(7 * static_cast<long>(t));
        row.close = close[t];
        row.vix = vix;
        row.fedfunds = fedfunds;
        row.dgs2 = dgs2;
        row.dgs10 = dgs10;
        row.hy_spread = hy;
        rows.push_back(row);
    }
    return tradeenv::MarketSeries(std::move(rows));
}

void write_synthetic_csv(const SyntheticSpec &spec, const std::filesystem::path &path) {
    tradeenv::write_market_csv(path, generate_synthetic(spec));
}

} // namespace qtrader::app
