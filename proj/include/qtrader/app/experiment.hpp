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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtrader/app/config.hpp"
#include "qtrader/common/error.hpp"
#include "qtrader/forecaster/forecaster.hpp"
#include "qtrader/metrics/metrics.hpp"
#include "qtrader/metrics/report.hpp"
#include "qtrader/tradeenv/market.hpp"

namespace qtrader::app {

/// A pipeline stage failed; what() names the stage and the cause.
class StageError : public Error {
  public:
    StageError(std::string stage, const std::string &cause);
    [[nodiscard]] const std::string &stage() const { return stage_; }

  private:
    std::string stage_;
};

struct RunArtifacts {
    std::filesystem::path directory;
    std::vector<std::filesystem::path> files;
    metrics::MetricsReport metrics;
    std::optional<forecaster::ForecastEvaluation> forecast_evaluation;
};

/// Raw (unnormalized) market series named by the config.
tradeenv::MarketSeries load_dataset(const ExperimentConfig &config);

struct ForecastStage {
    forecaster::ForecastModel model;
    std::vector<tradeenv::DatedValue> forecasts; // as attached (value or direction)
    std::optional<forecaster::ForecastEvaluation> evaluation; // held-out windows
    std::string evaluation_note; // why evaluation is missing
};

/// Trains the forecaster on the normalized series' training windows and forecasts every row.
ForecastStage run_forecaster(const ExperimentConfig &config, const tradeenv::MarketSeries &normalized);

/// ingest -> [forecast] -> train (skipped for random) -> evaluate -> metrics -> artifacts.
/// On failure every artifact written by this call is removed and StageError is thrown.
RunArtifacts run_experiment(const ExperimentConfig &config);

/// Forecaster only: forecast.csv (the market CSV with the forecast column), forecaster.bin and
/// forecast_evaluation.txt. Throws StageError.
RunArtifacts run_forecast(const ExperimentConfig &config);

/// Re-evaluates the checkpoint stored in the output directory (written by run_experiment) and
/// rewrites evaluation.csv, metrics and plots. Throws StageError.
RunArtifacts evaluate_checkpoint(const ExperimentConfig &config);

/// Recomputes metrics.{txt,csv} and the SVGs of a run directory from its evaluation.csv.
RunArtifacts regenerate_report(const std::filesystem::path &dir, double initial_cash, std::string_view stamp = {});

struct StrategySpec {
    std::string label;
    std::string slug;
    Strategy strategy = Strategy::classical;
    bool use_forecast = false;
};

/// Classical A3C, Classical A3C + LSTM, Quantum A3C, Quantum A3C + LSTM, Random.
std::vector<StrategySpec> default_strategies();
/// classical | classical+lstm | quantum | quantum+lstm | random. Throws ConfigError.
StrategySpec parse_strategy_spec(std::string_view text);

struct MatrixResult {
    std::vector<metrics::ComparisonColumn> columns;
    std::vector<std::filesystem::path> files; // comparison.txt, comparison.csv
};

/// Runs each strategy sequentially into <output>/<slug>/ from the same data and seed, isolating
/// failures, and writes the comparison table. Throws ConfigError for an empty list.
MatrixResult run_matrix(const ExperimentConfig &config, std::span<const StrategySpec> strategies);

} // namespace qtrader::app
