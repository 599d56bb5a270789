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

#include "qtrader/common/date.hpp"

namespace qtrader {

/// A completed buy-sell cycle of one index unit; profit is net of the trade cost.
struct Trade {
    Date buy_date;
    double buy_price = 0.0;
    Date sell_date;
    double sell_price = 0.0;
    double profit = 0.0;
};

} // namespace qtrader
