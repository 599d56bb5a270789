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

#include <cstdlib>
#include <string_view>

#include "qtrader/kernels/kernels.hpp"

namespace qtrader::kernels {

namespace {

const KernelTable &resolve() {
    const char *forced = std::getenv("QTRADER_SIMD");
    if (forced != nullptr && std::string_view{forced} == "scalar") {
        return scalar();
    }
    if (const KernelTable *table = avx2()) {
        return *table;
    }
    return scalar();
}

} // namespace

const KernelTable &active() {
    static const KernelTable &table = resolve();
    return table;
}

} // namespace qtrader::kernels
