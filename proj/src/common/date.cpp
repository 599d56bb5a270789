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

#include "qtrader/common/date.hpp"

#include <charconv>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"

namespace qtrader {

Date::Date(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) {
        throw UsageError(fmt::format("invalid calendar date {}-{}-{}", year, month, day));
    }
    days_ = std::chrono::sys_days{ymd};
}

namespace {

bool parse_field(std::string_view text, int &out) {
    const auto *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

} // namespace

Date Date::parse(std::string_view text) {
    int y = 0;
    int m = 0;
    int d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_field(text.substr(0, 4), y) ||
        !parse_field(text.substr(5, 2), m) || !parse_field(text.substr(8, 2), d)) {
        throw IngestionError(fmt::format("unparseable date '{}'", text));
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw IngestionError(fmt::format("invalid calendar date '{}'", text));
    }
    return Date{std::chrono::sys_days{ymd}};
}

std::string Date::iso() const {
    const auto ymd = this->ymd();
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

} // namespace qtrader
