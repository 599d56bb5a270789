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

#include "qtrader/forecaster/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"
#include "qtrader/diffnet/optimizer.hpp"
#include "qtrader/diffnet/tape.hpp"

namespace qtrader::forecaster {

using tradeenv::MarketSeries;

double weekly_return_pct(const MarketSeries &series, std::size_t t) {
    if (t == 0) {
        return 0.0;
    }
    return 100.0 * (series.row(t).close / series.row(t - 1).close - 1.0);
}

namespace {

std::vector<double> row_features(const MarketSeries &series, std::size_t t, double mean, double stddev) {
    const auto z = series.normalized_row(t);
    std::vector<double> f(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(tradeenv::kMarketFeatureCount));
    f.push_back(stddev > 0.0 ? (weekly_return_pct(series, t) - mean) / stddev : 0.0);
    return f;
}

std::vector<std::vector<double>> window_inputs(const MarketSeries &series, std::size_t first, std::size_t lookback,
                                               double mean, double stddev) {
    std::vector<std::vector<double>> inputs;
    inputs.reserve(lookback);
    for (std::size_t t = first; t < first + lookback; ++t) {
        inputs.push_back(row_features(series, t, mean, stddev));
    }
    return inputs;
}

} // namespace

ForecastDataset build_windows(const MarketSeries &series, std::size_t lookback) {
    if (lookback == 0) {
        throw UsageError("lookback must be at least 1");
    }
    if (series.size() < lookback + 1) {
        throw UsageError(
            fmt::format("series of {} rows is too short for lookback {} (needs {})", series.size(), lookback,
                        lookback + 1));
    }
    const auto &stats = series.stats();

    // Return statistics over rows 1..train_rows-1 (row 0 has no return).
    double mean = 0.0;
    double stddev = 0.0;
    const std::size_t train_rows = stats.train_rows;
    if (train_rows > 1) {
        double sum = 0.0;
        for (std::size_t t = 1; t < train_rows; ++t) {
            sum += weekly_return_pct(series, t);
        }
        mean = sum / static_cast<double>(train_rows - 1);
        double sq = 0.0;
        for (std::size_t t = 1; t < train_rows; ++t) {
            const double d = weekly_return_pct(series, t) - mean;
            sq += d * d;
        }
        stddev = std::sqrt(sq / static_cast<double>(train_rows - 1));
    }

    ForecastDataset ds;
    ds.lookback = lookback;
    ds.feature_count = tradeenv::kMarketFeatureCount + 1;
    ds.return_mean = mean;
    ds.return_stddev = stddev;
    for (std::size_t k = 0; k + lookback < series.size(); ++k) {
        ForecastWindow w;
        w.first_row = k;
        w.last_row = k + lookback - 1;
        w.target_row = k + lookback;
        w.inputs = window_inputs(series, k, lookback, mean, stddev);
        w.target = weekly_return_pct(series, w.target_row);
        if (w.target_row < train_rows) {
            ++ds.split;
        }
        ds.windows.push_back(std::move(w));
    }
    return ds;
}

ForecastModel::ForecastModel(std::size_t feature_count, std::size_t lookback, std::size_t hidden)
    : cell(feature_count, hidden, "forecaster.lstm"), head(hidden, 1, "forecaster.head"),
      normalizer("forecaster.return_normalizer", {2}), lookback_(lookback) {
    normalizer.value = {0.0, 1.0};
}

diffnet::ParameterList ForecastModel::parameters() { return {&cell.weight, &cell.bias, &head.weight, &head.bias}; }

diffnet::ConstParameterList ForecastModel::parameters() const {
    return {&cell.weight, &cell.bias, &head.weight, &head.bias};
}

diffnet::ParameterList ForecastModel::checkpoint_parameters() {
    auto list = parameters();
    list.push_back(&normalizer);
    return list;
}

namespace {

diffnet::Var record_prediction(diffnet::Tape &tape, ForecastModel &model,
                               const std::vector<std::vector<double>> &window) {
    const std::vector<double> zeros(model.cell.hidden(), 0.0);
    diffnet::Var h = tape.input(zeros);
    diffnet::Var c = tape.input(zeros);
    for (const auto &x : window) {
        std::tie(h, c) = tape.lstm(model.cell, tape.input(x), h, c);
    }
    return tape.pick(tape.dense(model.head, h), 0);
}

} // namespace

double forecast_loss(ForecastModel &model, std::span<const ForecastWindow> windows, bool accumulate_grads) {
    if (windows.empty()) {
        throw UsageError("forecast loss over an empty window set");
    }
    const double inv_n = 1.0 / static_cast<double>(windows.size());
    double total = 0.0;
    diffnet::Tape tape;
    for (const auto &w : windows) {
        tape.clear();
        const auto pred = record_prediction(tape, model, w.inputs);
        const auto err = tape.sub(pred, tape.constant(w.target));
        const auto loss = tape.scale(tape.square(err), inv_n);
        total += tape.scalar(loss);
        if (accumulate_grads) {
            tape.backward(loss);
        }
    }
    return total;
}

ForecastModel train_forecaster(const ForecastDataset &dataset, const ForecasterConfig &config) {
    if (dataset.split == 0) {
        throw UsageError("forecaster training split is empty");
    }
    if (config.lookback != dataset.lookback) {
        throw ConfigError(
            fmt::format("forecaster lookback {} does not match dataset lookback {}", config.lookback, dataset.lookback));
    }
    if (config.hidden == 0 || config.batch_size == 0) {
        throw ConfigError("forecaster hidden size and batch size must be positive");
    }
    std::mt19937_64 rng(config.seed);
    ForecastModel model(dataset.feature_count, dataset.lookback, config.hidden);
    model.cell.init(rng);
    model.head.init(rng);
    model.normalizer.value = {dataset.return_mean, dataset.return_stddev};

    auto params = model.parameters();
    std::vector<double> theta = diffnet::flatten_values(diffnet::as_const(params));
    diffnet::Optimizer optimizer({diffnet::OptimizerKind::adam, config.learning_rate}, theta.size());

    const auto train = dataset.train();
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<ForecastWindow> batch;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            batch.clear();
            for (std::size_t k = start; k < end; ++k) {
                batch.push_back(train[order[k]]);
            }
            diffnet::zero_grads(params);
            const double loss = forecast_loss(model, batch, true);
            if (!std::isfinite(loss)) {
                throw TrainingError(fmt::format("forecaster loss diverged at epoch {}", epoch + 1));
            }
            epoch_loss += loss * static_cast<double>(batch.size());
            const auto grads = diffnet::flatten_grads(diffnet::as_const(params));
            optimizer.step(theta, grads);
            diffnet::assign_values(params, theta);
        }
        model.loss_history.push_back(epoch_loss / static_cast<double>(order.size()));
    }
    return model;
}

double predict(const ForecastModel &model, const std::vector<std::vector<double>> &window) {
    if (window.size() != model.lookback()) {
        throw UsageError(fmt::format("window has {} rows, model lookback is {}", window.size(), model.lookback()));
    }
    const std::size_t hidden = model.cell.hidden();
    std::vector<double> h(hidden, 0.0);
    std::vector<double> c(hidden, 0.0);
    for (const auto &x : window) {
        auto cache = diffnet::lstm_forward(model.cell, x, h, c);
        h = std::move(cache.h);
        c = std::move(cache.c);
    }
    return model.head.forward(h)[0];
}

std::vector<tradeenv::DatedValue> forecast_series(const ForecastModel &model, const MarketSeries &series) {
    const std::size_t lookback = model.lookback();
    std::vector<tradeenv::DatedValue> out;
    out.reserve(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        double value = 0.0;
        if (t + 1 >= lookback) {
            const auto window =
                window_inputs(series, t + 1 - lookback, lookback, model.return_mean(), model.return_stddev());
            value = predict(model, window);
        }
        out.push_back({series.row(t).date, value});
    }
    return out;
}

ForecastEvaluation evaluate_forecasts(std::span<const double> predictions, std::span<const double> actuals) {
    if (predictions.size() != actuals.size() || predictions.empty()) {
        throw EvaluationError(fmt::format("rmse: {} predictions vs {} actuals", predictions.size(), actuals.size()));
    }
    const auto n = static_cast<double>(predictions.size());
    double sq = 0.0;
    std::size_t agree = 0;
    double mp = 0.0;
    double ma = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - actuals[i];
        sq += d * d;
        agree += (predictions[i] >= 0.0) == (actuals[i] >= 0.0) ? 1 : 0;
        mp += predictions[i];
        ma += actuals[i];
    }
    mp /= n;
    ma /= n;
    double cov = 0.0;
    double vp = 0.0;
    double va = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        cov += (predictions[i] - mp) * (actuals[i] - ma);
        vp += (predictions[i] - mp) * (predictions[i] - mp);
        va += (actuals[i] - ma) * (actuals[i] - ma);
    }
    if (vp == 0.0 || va == 0.0) {
        throw EvaluationError("pearson: correlation undefined for a constant vector");
    }
    return {std::sqrt(sq / n), cov / std::sqrt(vp * va), static_cast<double>(agree) / n};
}

} // namespace qtrader::forecaster
