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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "qtrader/a3c/trainer.hpp"
#include "qtrader/forecaster/forecaster.hpp"
#include "qtrader/tradeenv/env.hpp"

namespace qtrader::app {

enum class Strategy { classical, quantum, random };
Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy strategy);

/// Deterministic synthetic market. `amplitude` is the price swing for sawtooth and the peak weekly
/// return for sine; `drift` and `volatility` are per-week fractions.
struct SyntheticSpec {
    std::string kind = "sawtooth"; // sawtooth | trend | white-noise | ar1 | sine
    std::size_t length = 120;
    std::uint64_t seed = 1;
    std::size_t period = 8;
    double amplitude = 0.10;
    std::string ramp = "down"; // sawtooth: down = jump then linear decline, up = linear climb then drop
    double phi = 0.9;
    double drift = 0.002;
    double volatility = 0.02;
    double base = 4000.0;
    std::string start = "2022-01-07";

    /// Throws ConfigError on an unknown kind, length < 10 or out-of-range parameters.
    void validate() const;
};

/// Whether the forecast column carries the predicted return or only its sign (+1 / -1).
enum class ForecastMode { value, direction };

struct ExperimentConfig {
    std::optional<std::filesystem::path> data_path;
    std::optional<SyntheticSpec> synthetic;
    double train_fraction = 0.8;

    Strategy strategy = Strategy::classical;
    bool use_forecast = false;
    ForecastMode forecast_mode = ForecastMode::value;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "runs/default";

    a3c::TrainConfig train;
    tradeenv::EnvConfig env;
    forecaster::ForecasterConfig forecaster;

    /// Exactly one data source, existing data file, valid sub-configs. Throws ConfigError.
    void validate() const;
    /// Train and forecaster seeds follow the experiment seed.
    [[nodiscard]] a3c::TrainConfig resolved_train() const;
    [[nodiscard]] forecaster::ForecasterConfig resolved_forecaster() const;
};

/// INI with sections [data], [experiment], [train], [env], [forecaster]. Relative data paths are
/// resolved against `base_dir`. Unknown sections or keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(std::istream &in, const std::filesystem::path &base_dir = {});
ExperimentConfig load_config(const std::filesystem::path &path);

/// Fully resolved snapshot in the same INI format; parse_config(write_config(c)) == c.
void write_config(std::ostream &out, const ExperimentConfig &config, bool include_output = true);

/// FNV-1a of the resolved snapshot without the output directory, as 16 hex digits.
std::string config_hash(const ExperimentConfig &config);

/// "config_hash=<hash> seed=<seed>", the header stamped into every artifact.
std::string artifact_stamp(const ExperimentConfig &config);

} // namespace qtrader::app
