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

#include "qtrader/tradeenv/market.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "qtrader/common/csv.hpp"
#include "qtrader/common/error.hpp"

namespace qtrader::tradeenv {

MarketSeries::MarketSeries(std::vector<MarketRow> rows) : rows_(std::move(rows)) {
    for (std::size_t t = 0; t < rows_.size(); ++t) {
        if (!(rows_[t].close > 0.0) || !std::isfinite(rows_[t].close)) {
            throw IngestionError(fmt::format("row {} ({}): close must be positive, got {}", t, rows_[t].date.iso(),
                                             rows_[t].close));
        }
        if (t > 0 && !(rows_[t - 1].date < rows_[t].date)) {
            throw IngestionError(fmt::format("row {}: date {} does not follow {}", t, rows_[t].date.iso(),
                                             rows_[t - 1].date.iso()));
        }
    }
}

bool MarketSeries::has_forecast() const { return !rows_.empty() && rows_.front().forecast.has_value(); }

const FeatureStats &MarketSeries::stats() const {
    if (!stats_) {
        throw UsageError("market series has not been normalized");
    }
    return *stats_;
}

std::span<const double> MarketSeries::normalized_row(std::size_t t) const {
    if (!stats_) {
        throw UsageError("market series has not been normalized");
    }
    const std::size_t width = feature_count();
    return std::span<const double>(normalized_).subspan(t * width, width);
}

namespace {

bool is_missing(std::string_view cell) {
    return cell.empty() || cell == "NA" || cell == "nan" || cell == "NaN" || cell == ".";
}

double parse_number(std::string_view cell, std::size_t line, std::string_view column) {
    double value = 0.0;
    const auto *end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw IngestionError(fmt::format("line {}: column '{}' has unparseable value '{}'", line, column, cell));
    }
    return value;
}

struct RawRow {
    Date date;
    std::size_t line;
    std::array<std::optional<double>, kMarketFeatureCount> features;
    std::optional<double> forecast;
};

} // namespace

MarketSeries parse_market_csv(std::istream &in, const ColumnMap &columns) {
    const CsvTable table = read_csv(in);
    const std::array<std::string_view, kMarketFeatureCount> names{columns.close,  columns.vix,   columns.fedfunds,
                                                                  columns.dgs2,   columns.dgs10, columns.hy_spread};
    const std::size_t date_col = table.column(columns.date);
    std::array<std::size_t, kMarketFeatureCount> feature_cols{};
    for (std::size_t k = 0; k < kMarketFeatureCount; ++k) {
        feature_cols[k] = table.column(names[k]);
    }
    const bool with_forecast = table.has_column(columns.forecast);
    const std::size_t forecast_col = with_forecast ? table.column(columns.forecast) : 0;

    std::vector<RawRow> raw;
    raw.reserve(table.records.size());
    for (const auto &rec : table.records) {
        RawRow r;
        r.line = rec.line;
        try {
            r.date = Date::parse(rec.fields[date_col]);
        } catch (const IngestionError &e) {
            throw IngestionError(fmt::format("line {}: {}", rec.line, e.what()));
        }
        for (std::size_t k = 0; k < kMarketFeatureCount; ++k) {
            const auto &cell = rec.fields[feature_cols[k]];
            if (!is_missing(cell)) {
                r.features[k] = parse_number(cell, rec.line, names[k]);
            }
        }
        if (with_forecast) {
            const auto &cell = rec.fields[forecast_col];
            r.forecast = is_missing(cell) ? 0.0 : parse_number(cell, rec.line, columns.forecast);
        }
        raw.push_back(r);
    }

    std::stable_sort(raw.begin(), raw.end(), [](const RawRow &a, const RawRow &b) { return a.date < b.date; });
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].date == raw[i - 1].date) {
            throw IngestionError(fmt::format("line {}: duplicate date {} (first seen on line {})", raw[i].line,
                                             raw[i].date.iso(), raw[i - 1].line));
        }
    }

    std::vector<MarketRow> rows;
    rows.reserve(raw.size());
    std::array<std::optional<double>, kMarketFeatureCount> last{};
    for (const auto &r : raw) {
        bool complete = true;
        for (std::size_t k = 0; k < kMarketFeatureCount; ++k) {
            if (r.features[k]) {
                last[k] = r.features[k];
            }
            complete = complete && last[k].has_value();
        }
        if (!complete) {
            continue; // leading row that cannot be forward-filled
        }
        MarketRow row;
        row.date = r.date;
        row.close = *last[0];
        row.vix = *last[1];
        row.fedfunds = *last[2];
        row.dgs2 = *last[3];
        row.dgs10 = *last[4];
        row.hy_spread = *last[5];
        row.forecast = r.forecast;
        if (!(row.close > 0.0)) {
            throw IngestionError(fmt::format("line {}: close must be positive, got {}", r.line, row.close));
        }
        rows.push_back(row);
    }
    if (rows.empty()) {
        throw IngestionError("market data contains no complete rows");
    }
    return MarketSeries{std::move(rows)};
}

MarketSeries load_market_csv(const std::filesystem::path &path, const ColumnMap &columns) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError(fmt::format("cannot open market data '{}'", path.string()));
    }
    try {
        return parse_market_csv(in, columns);
    } catch (const IngestionError &e) {
        throw IngestionError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void write_market_csv(std::ostream &out, const MarketSeries &series) {
    const bool with_forecast = series.has_forecast();
    out << "date,close,vix,fedfunds,dgs2,dgs10,hy_spread" << (with_forecast ? ",forecast" : "") << '\n';
    for (const auto &r : series.rows()) {
        out << r.date.iso();
        for (double v : r.features()) {
            out << ',' << format_number(v);
        }
        if (with_forecast) {
            out << ',' << format_number(r.forecast.value_or(0.0));
        }
        out << '\n';
    }
}

void write_market_csv(const std::filesystem::path &path, const MarketSeries &series) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw UsageError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    write_market_csv(out, series);
}

MarketSeries zscore(const MarketSeries &series, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
        throw ConfigError(fmt::format("train fraction must lie in (0, 1], got {}", train_fraction));
    }
    const std::size_t n = series.size();
    const std::size_t width = series.feature_count();
    const auto train_rows = std::max<std::size_t>(
        1, std::min(n, static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n) - 1e-12))));

    auto raw = [&](std::size_t t, std::size_t k) {
        const auto &row = series.row(t);
        return k < kMarketFeatureCount ? row.features()[k] : row.forecast.value_or(0.0);
    };

    FeatureStats stats;
    stats.train_rows = train_rows;
    stats.train_fraction = train_fraction;
    stats.mean.assign(width, 0.0);
    stats.stddev.assign(width, 0.0);
    for (std::size_t k = 0; k < width; ++k) {
        double sum = 0.0;
        for (std::size_t t = 0; t < train_rows; ++t) {
            sum += raw(t, k);
        }
        const double mean = sum / static_cast<double>(train_rows);
        double sq = 0.0;
        for (std::size_t t = 0; t < train_rows; ++t) {
            const double d = raw(t, k) - mean;
            sq += d * d;
        }
        stats.mean[k] = mean;
        stats.stddev[k] = std::sqrt(sq / static_cast<double>(train_rows));
        if (stats.stddev[k] == 0.0) {
            const std::string name = k < kMarketFeatureCount ? std::string(kMarketFeatureNames[k]) : "forecast";
            stats.degenerate.push_back(name);
            spdlog::warn("feature '{}' is constant over the training prefix; normalized to zeros", name);
        }
    }

    MarketSeries out = series;
    out.normalized_.assign(n * width, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t k = 0; k < width; ++k) {
            const double sd = stats.stddev[k];
            out.normalized_[t * width + k] = sd == 0.0 ? 0.0 : (raw(t, k) - stats.mean[k]) / sd;
        }
    }
    out.stats_ = std::move(stats);
    return out;
}

MarketSeries attach_forecast(const MarketSeries &series, std::span<const DatedValue> forecasts) {
    if (forecasts.size() != series.size()) {
        throw UsageError(fmt::format("forecast vector has {} entries for {} rows", forecasts.size(), series.size()));
    }
    std::vector<MarketRow> rows = series.rows();
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (forecasts[t].date != rows[t].date) {
            throw UsageError(fmt::format("forecast {} is dated {} but row {} is {}", t, forecasts[t].date.iso(), t,
                                         rows[t].date.iso()));
        }
        if (!std::isfinite(forecasts[t].value)) {
            throw UsageError(fmt::format("forecast for {} is not finite", rows[t].date.iso()));
        }
        rows[t].forecast = forecasts[t].value;
    }
    MarketSeries out{std::move(rows)};
    if (series.normalized()) {
        return zscore(out, series.stats().train_fraction);
    }
    return out;
}

} // namespace qtrader::tradeenv
