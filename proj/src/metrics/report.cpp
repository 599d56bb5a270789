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

#include "qtrader/metrics/report.hpp"

#include <algorithm>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "qtrader/common/csv.hpp"

namespace qtrader::metrics {

std::string format_display(const MetricValue &value, double scale) {
    if (!value.defined()) {
        return "n/a";
    }
    return fmt::format("{:.2f}", value.value() * scale);
}

namespace {

constexpr std::string_view kTradeLabel = "Trades";

std::size_t label_width() {
    std::size_t w = kTradeLabel.size();
    for (const auto &row : metric_rows()) {
        w = std::max(w, row.label.size());
    }
    return w;
}

void write_stamp(std::ostream &out, std::string_view stamp) {
    if (!stamp.empty()) {
        out << "# " << stamp << '\n';
    }
}

} // namespace

void write_report_text(std::ostream &out, const MetricsReport &report, std::string_view title) {
    const std::size_t w = label_width();
    out << fmt::format("{:<{}}  {:>12}\n", "Metric", w, title);
    out << std::string(w + 14, '-') << '\n';
    for (const auto &row : metric_rows()) {
        out << fmt::format("{:<{}}  {:>12}\n", row.label, w, format_display(report.*row.field, row.display_scale));
    }
    out << fmt::format("{:<{}}  {:>12}\n", kTradeLabel, w, report.trade_count);
}

void write_report_csv(std::ostream &out, const MetricsReport &report, std::string_view stamp) {
    write_stamp(out, stamp);
    out << "metric,value,note\n";
    for (const auto &row : metric_rows()) {
        const MetricValue &v = report.*row.field;
        if (v.defined()) {
            out << row.key << ',' << format_number(v.value()) << ",\n";
        } else {
            std::string reason = v.reason();
            std::replace(reason.begin(), reason.end(), ',', ';');
            out << row.key << ",," << reason << '\n';
        }
    }
    out << "trade_count," << report.trade_count << ",\n";
}

void write_comparison_text(std::ostream &out, std::span<const ComparisonColumn> columns) {
    const std::size_t w = label_width();
    std::vector<std::size_t> widths;
    for (const auto &c : columns) {
        widths.push_back(std::max<std::size_t>(c.name.size(), 10));
    }
    out << fmt::format("{:<{}}", "Metric", w);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << fmt::format("  {:>{}}", columns[i].name, widths[i]);
    }
    out << '\n';
    std::size_t total = w;
    for (auto cw : widths) {
        total += cw + 2;
    }
    out << std::string(total, '-') << '\n';

    auto cell = [&](std::size_t i, const auto &fn) -> std::string {
        if (!columns[i].report) {
            return "FAILED";
        }
        return fn(*columns[i].report);
    };
    for (const auto &row : metric_rows()) {
        out << fmt::format("{:<{}}", row.label, w);
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const auto text = cell(i, [&](const MetricsReport &r) { return format_display(r.*row.field, row.display_scale); });
            out << fmt::format("  {:>{}}", text, widths[i]);
        }
        out << '\n';
    }
    out << fmt::format("{:<{}}", kTradeLabel, w);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const auto text = cell(i, [](const MetricsReport &r) { return std::to_string(r.trade_count); });
        out << fmt::format("  {:>{}}", text, widths[i]);
    }
    out << '\n';
    for (const auto &c : columns) {
        if (!c.report) {
            out << fmt::format("\n{} failed: {}", c.name, c.failure);
        }
    }
    if (std::any_of(columns.begin(), columns.end(), [](const auto &c) { return !c.report; })) {
        out << '\n';
    }
}

void write_comparison_csv(std::ostream &out, std::span<const ComparisonColumn> columns, std::string_view stamp) {
    write_stamp(out, stamp);
    out << "metric";
    for (const auto &c : columns) {
        out << ',' << c.name;
    }
    out << '\n';
    for (const auto &row : metric_rows()) {
        out << row.key;
        for (const auto &c : columns) {
            out << ',';
            if (!c.report) {
                out << "failed";
            } else if (const auto &v = (*c.report).*row.field; v.defined()) {
                out << format_number(v.value());
            }
        }
        out << '\n';
    }
    out << "trade_count";
    for (const auto &c : columns) {
        out << ',' << (c.report ? std::to_string(c.report->trade_count) : std::string("failed"));
    }
    out << '\n';
}

} // namespace qtrader::metrics
