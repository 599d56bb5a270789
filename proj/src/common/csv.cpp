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

#include "qtrader/common/csv.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"

namespace qtrader {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw IngestionError(fmt::format("missing column '{}'", name));
    }
    return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(std::string_view name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable read_csv(std::istream &in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        auto fields = split_csv_line(body);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw IngestionError(fmt::format("line {}: expected {} fields, found {}", line_no, table.header.size(),
                                             fields.size()));
        }
        table.records.push_back({line_no, std::move(fields)});
    }
    if (!have_header) {
        throw IngestionError("CSV has no header row");
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError(fmt::format("cannot open '{}'", path.string()));
    }
    return read_csv(in);
}

std::string format_number(double value) { return fmt::format("{}", value); }

} // namespace qtrader
