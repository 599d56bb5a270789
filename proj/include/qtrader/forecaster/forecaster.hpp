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
#include <span>
#include <vector>

#include "qtrader/diffnet/layers.hpp"
#include "qtrader/diffnet/parameter.hpp"
#include "qtrader/tradeenv/market.hpp"

namespace qtrader::forecaster {

/// One supervised example: `lookback` consecutive feature rows and the percent return of the row
/// right after them.
struct ForecastWindow {
    std::vector<std::vector<double>> inputs;
    double target = 0.0;
    std::size_t first_row = 0;
    std::size_t last_row = 0;   // last input row
    std::size_t target_row = 0; // always last_row + 1
};

struct ForecastDataset {
    std::vector<ForecastWindow> windows;
    /// windows[0, split) train, windows[split, end) validate. Training windows are those whose
    /// target row lies inside the series' normalization prefix.
    std::size_t split = 0;
    std::size_t lookback = 0;
    std::size_t feature_count = 0;
    double return_mean = 0.0;
    double return_stddev = 1.0;

    [[nodiscard]] std::span<const ForecastWindow> train() const { return {windows.data(), split}; }
    [[nodiscard]] std::span<const ForecastWindow> validation() const {
        return std::span<const ForecastWindow>(windows).subspan(split);
    }
};

/// Percent close-to-close return of row t (0 for the first row).
double weekly_return_pct(const tradeenv::MarketSeries &series, std::size_t t);

/// Window k spans rows [k, k + lookback) and targets 100 * (close[k+lookback] / close[k+lookback-1] - 1).
/// Each input row is the series' z-scored market features followed by the z-scored weekly return.
/// Requires a normalized series with at least lookback + 1 rows; throws UsageError otherwise.
ForecastDataset build_windows(const tradeenv::MarketSeries &series, std::size_t lookback);

struct ForecasterConfig {
    std::size_t lookback = 8;
    std::size_t hidden = 32;
    std::size_t epochs = 200;
    std::size_t batch_size = 16;
    double learning_rate = 5e-3;
    std::uint64_t seed = 1;
};

/// LSTM over the window followed by a dense head on the final hidden state.
class ForecastModel {
  public:
    ForecastModel() = default;
    ForecastModel(std::size_t feature_count, std::size_t lookback, std::size_t hidden);

    [[nodiscard]] std::size_t lookback() const { return lookback_; }
    [[nodiscard]] std::size_t feature_count() const { return cell.in(); }

    diffnet::ParameterList parameters();
    [[nodiscard]] diffnet::ConstParameterList parameters() const;
    /// Trainable parameters plus the return normalizer; the checkpoint layout.
    diffnet::ParameterList checkpoint_parameters();

    [[nodiscard]] double return_mean() const { return normalizer.value[0]; }
    [[nodiscard]] double return_stddev() const { return normalizer.value[1]; }

    diffnet::LstmCell cell;
    diffnet::DenseLayer head;
    diffnet::Parameter normalizer; // {return mean, return stddev}
    std::vector<double> loss_history;

  private:
    std::size_t lookback_ = 0;
};

/// Minimizes mean squared error with BPTT and Adam. Deterministic for a given seed.
/// Throws UsageError on an empty training split and TrainingError on a non-finite loss.
ForecastModel train_forecaster(const ForecastDataset &dataset, const ForecasterConfig &config);

/// Throws UsageError when the window length differs from the model's lookback.
double predict(const ForecastModel &model, const std::vector<std::vector<double>> &window);

/// Mean squared error over `windows`; when `accumulate_grads` is set, adds d(loss)/d(theta) into
/// the model's parameter gradients.
double forecast_loss(ForecastModel &model, std::span<const ForecastWindow> windows, bool accumulate_grads);

/// Prediction for every row, dated by the row whose data it uses (rows with fewer than `lookback`
/// predecessors get 0). Suitable for tradeenv::attach_forecast.
std::vector<tradeenv::DatedValue> forecast_series(const ForecastModel &model, const tradeenv::MarketSeries &series);

struct ForecastEvaluation {
    double rmse = 0.0;
    double pearson = 0.0;
    double directional_accuracy = 0.0;
};

/// rmse, sample Pearson correlation and sign agreement (sign(0) counts as up).
/// Throws EvaluationError naming the metric on length mismatch or a constant input.
ForecastEvaluation evaluate_forecasts(std::span<const double> predictions, std::span<const double> actuals);

} // namespace qtrader::forecaster
