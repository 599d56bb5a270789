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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qtrader {

struct CsvRecord {
    std::size_t line; // 1-based line number in the source
    std::vector<std::string> fields;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRecord> records;

    /// Column index by name; throws IngestionError when absent.
    [[nodiscard]] std::size_t column(std::string_view name) const;
    [[nodiscard]] bool has_column(std::string_view name) const;
};

/// Comma-separated, no quoting. Blank lines and lines starting with '#' are skipped; the first
/// remaining line is the header. Fields are trimmed of surrounding whitespace.
CsvTable read_csv(std::istream &in);
CsvTable read_csv(const std::filesystem::path &path);

std::vector<std::string> split_csv_line(std::string_view line);

/// Shortest representation that round-trips to the same double.
std::string format_number(double value);

} // namespace qtrader
