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

#include <span>
#include <vector>

namespace qtrader::a3c {

/// R_t = r_t + gamma * R_{t+1}, seeded with R_n = bootstrap (0 at a terminal state).
std::vector<double> n_step_returns(std::span<const double> rewards, double bootstrap, double gamma);

} // namespace qtrader::a3c
