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

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qtrader/metrics/metrics.hpp"

namespace qtrader::metrics {

/// Display string for one metric: two decimals after `scale`, or "n/a".
std::string format_display(const MetricValue &value, double scale);

/// Aligned two-column text table, one row per metric plus trade count.
void write_report_text(std::ostream &out, const MetricsReport &report, std::string_view title);

/// Key-value CSV: metric,value,note. Undefined metrics leave value empty and carry the reason.
void write_report_csv(std::ostream &out, const MetricsReport &report, std::string_view stamp = {});

/// One strategy column of a comparison table; `report` is empty when the run failed.
struct ComparisonColumn {
    std::string name;
    std::optional<MetricsReport> report;
    std::string failure;
};

/// Rows = 19 metrics + trade count, columns = strategies. Failed columns show "FAILED".
void write_comparison_text(std::ostream &out, std::span<const ComparisonColumn> columns);
/// Header `metric,<strategy>...`; failed columns hold the literal `failed`.
void write_comparison_csv(std::ostream &out, std::span<const ComparisonColumn> columns, std::string_view stamp = {});

} // namespace qtrader::metrics
