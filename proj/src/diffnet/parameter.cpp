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

#include "qtrader/diffnet/parameter.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"

namespace qtrader::diffnet {

Parameter::Parameter(std::string name, std::vector<std::size_t> shape) : name(std::move(name)), shape(std::move(shape)) {
    const std::size_t n =
        std::accumulate(this->shape.begin(), this->shape.end(), std::size_t{1}, std::multiplies<>{});
    value.assign(n, 0.0);
    grad.assign(n, 0.0);
}

void Parameter::zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }

void Parameter::fill_uniform(std::mt19937_64 &rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    for (auto &v : value) {
        v = dist(rng);
    }
}

std::size_t total_size(const ConstParameterList &params) {
    std::size_t n = 0;
    for (const auto *p : params) {
        n += p->size();
    }
    return n;
}

std::vector<double> flatten_values(const ConstParameterList &params) {
    std::vector<double> flat;
    flat.reserve(total_size(params));
    for (const auto *p : params) {
        flat.insert(flat.end(), p->value.begin(), p->value.end());
    }
    return flat;
}

std::vector<double> flatten_grads(const ConstParameterList &params) {
    std::vector<double> flat;
    flat.reserve(total_size(params));
    for (const auto *p : params) {
        flat.insert(flat.end(), p->grad.begin(), p->grad.end());
    }
    return flat;
}

void assign_values(const ParameterList &params, std::span<const double> flat) {
    const std::size_t expected = total_size(as_const(params));
    if (flat.size() != expected) {
        throw UsageError(fmt::format("flat parameter vector has {} entries, model expects {}", flat.size(), expected));
    }
    std::size_t offset = 0;
    for (auto *p : params) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), p->size(), p->value.begin());
        offset += p->size();
    }
}

void zero_grads(const ParameterList &params) {
    for (auto *p : params) {
        p->zero_grad();
    }
}

} // namespace qtrader::diffnet
