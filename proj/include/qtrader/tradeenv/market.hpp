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

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtrader/common/date.hpp"

namespace qtrader::tradeenv {

inline constexpr std::size_t kMarketFeatureCount = 6;
inline constexpr std::array<std::string_view, kMarketFeatureCount> kMarketFeatureNames{
    "close", "vix", "fedfunds", "dgs2", "dgs10", "hy_spread"};

/// One weekly observation. Rates and spreads are in percent, close in index points.
struct MarketRow {
    Date date;
    double close = 0.0;
    double vix = 0.0;
    double fedfunds = 0.0;
    double dgs2 = 0.0;
    double dgs10 = 0.0;
    double hy_spread = 0.0;
    /// Predicted next-week return in percent, when a forecaster has been attached.
    std::optional<double> forecast;

    [[nodiscard]] std::array<double, kMarketFeatureCount> features() const {
        return {close, vix, fedfunds, dgs2, dgs10, hy_spread};
    }
};

/// Per-feature z-score statistics (population standard deviation) from the training prefix.
struct FeatureStats {
    std::vector<double> mean;
    std::vector<double> stddev;
    std::size_t train_rows = 0;
    double train_fraction = 1.0;
    /// Features whose training-prefix deviation was zero; they normalize to all-zeros.
    std::vector<std::string> degenerate;
};

/// Ordered weekly rows. Immutable after construction; a normalized copy additionally carries the
/// z-scored feature matrix used for observations.
class MarketSeries {
  public:
    MarketSeries() = default;
    /// Throws IngestionError unless every close is positive and dates strictly increase.
    explicit MarketSeries(std::vector<MarketRow> rows);

    [[nodiscard]] std::size_t size() const { return rows_.size(); }
    [[nodiscard]] bool empty() const { return rows_.empty(); }
    [[nodiscard]] const std::vector<MarketRow> &rows() const { return rows_; }
    [[nodiscard]] const MarketRow &row(std::size_t t) const { return rows_[t]; }

    [[nodiscard]] bool has_forecast() const;
    [[nodiscard]] bool normalized() const { return stats_.has_value(); }
    /// Throws UsageError on an unnormalized series.
    [[nodiscard]] const FeatureStats &stats() const;

    /// 6 market features, plus the forecast when attached.
    [[nodiscard]] std::size_t feature_count() const { return kMarketFeatureCount + (has_forecast() ? 1 : 0); }
    /// Z-scored features of row t. Throws UsageError on an unnormalized series.
    [[nodiscard]] std::span<const double> normalized_row(std::size_t t) const;

  private:
    friend MarketSeries zscore(const MarketSeries &series, double train_fraction);

    std::vector<MarketRow> rows_;
    std::optional<FeatureStats> stats_;
    std::vector<double> normalized_; // row-major [size x feature_count]
};

/// Column names for each field, defaulting to the documented schema.
struct ColumnMap {
    std::string date = "date";
    std::string close = "close";
    std::string vix = "vix";
    std::string fedfunds = "fedfunds";
    std::string dgs2 = "dgs2";
    std::string dgs10 = "dgs10";
    std::string hy_spread = "hy_spread";
    std::string forecast = "forecast";
};

/// Reads `date,close,vix,fedfunds,dgs2,dgs10,hy_spread[,forecast]`. Rows are ordered by date; empty,
/// "NA", "nan" and "." cells are forward-filled from the previous row and leading rows that cannot
/// be filled are dropped. Throws IngestionError (with the line number) on unparseable values,
/// duplicate dates or an empty result.
MarketSeries parse_market_csv(std::istream &in, const ColumnMap &columns = {});
MarketSeries load_market_csv(const std::filesystem::path &path, const ColumnMap &columns = {});

void write_market_csv(std::ostream &out, const MarketSeries &series);
void write_market_csv(const std::filesystem::path &path, const MarketSeries &series);

/// Returns a normalized copy: z = (x - mean) / stddev with population statistics from the first
/// ceil(train_fraction * n) rows. Zero-deviation features map to zeros and are logged as warnings.
/// Throws ConfigError unless 0 < train_fraction <= 1.
MarketSeries zscore(const MarketSeries &series, double train_fraction);

struct DatedValue {
    Date date;
    double value;
};

/// Sets the forecast of every row. `forecasts` must list exactly the series' dates in order; the
/// value at row t predicts the return of week t+1 from data up to t. A normalized input is
/// re-normalized with the same train fraction. Throws UsageError on any misalignment.
MarketSeries attach_forecast(const MarketSeries &series, std::span<const DatedValue> forecasts);

} // namespace qtrader::tradeenv
