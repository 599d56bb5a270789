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

#include <filesystem>

#include "qtrader/app/config.hpp"
#include "qtrader/tradeenv/market.hpp"

namespace qtrader::app {

/// Weekly synthetic market in the documented CSV schema, deterministic for a given spec.
///
///   sawtooth     close repeats every `period` rows, swinging by `amplitude` around `base`
///   trend        close = base * (1 + drift * t), noiseless
///   white-noise  i.i.d. normal weekly returns (drift, volatility)
///   ar1          r_t = drift + phi * (r_{t-1} - drift) + volatility * eps_t
///   sine         r_t = amplitude * sin(2 pi (t + 1/4) / period)
///
/// Deterministic kinds hold the macro columns constant; the noisy kinds give them small seeded
/// random walks. Throws ConfigError on an invalid spec.
tradeenv::MarketSeries generate_synthetic(const SyntheticSpec &spec);

void write_synthetic_csv(const SyntheticSpec &spec, const std::filesystem::path &path);

} // namespace qtrader::app
