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

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace qtrader {

/// Calendar date at day resolution.
class Date {
  public:
    Date() = default;
    explicit Date(std::chrono::sys_days days) : days_(days) {}
    Date(int year, unsigned month, unsigned day);

    /// Parses `YYYY-MM-DD`. Throws IngestionError on malformed input.
    static Date parse(std::string_view text);

    [[nodiscard]] std::chrono::sys_days days() const { return days_; }
    [[nodiscard]] std::chrono::year_month_day ymd() const {
        return std::chrono::year_month_day{days_};
    }
    [[nodiscard]] std::string iso() const;

    [[nodiscard]] Date plus_days(long n) const { return Date{days_ + std::chrono::days{n}}; }

    auto operator<=>(const Date &) const = default;

  private:
    std::chrono::sys_days days_{};
};

/// Signed day count `to - from`.
inline long days_between(const Date &from, const Date &to) {
    return (to.days() - from.days()).count();
}

} // namespace qtrader
