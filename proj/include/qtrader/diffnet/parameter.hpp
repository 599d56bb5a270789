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
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qtrader::diffnet {

/// A named trainable tensor with its gradient buffer. Storage is row-major.
struct Parameter {
    std::string name;
    std::vector<std::size_t> shape;
    std::vector<double> value;
    std::vector<double> grad;

    Parameter() = default;
    Parameter(std::string name, std::vector<std::size_t> shape);

    [[nodiscard]] std::size_t size() const { return value.size(); }
    void zero_grad();
    void fill_uniform(std::mt19937_64 &rng, double lo, double hi);
};

/// Ordered view over a model's parameters; this order defines the flat layout.
using ParameterList = std::vector<Parameter *>;
using ConstParameterList = std::vector<const Parameter *>;

std::size_t total_size(const ConstParameterList &params);
std::vector<double> flatten_values(const ConstParameterList &params);
std::vector<double> flatten_grads(const ConstParameterList &params);
/// Throws UsageError when flat.size() differs from the combined parameter size.
void assign_values(const ParameterList &params, std::span<const double> flat);
void zero_grads(const ParameterList &params);

inline ConstParameterList as_const(const ParameterList &params) { return {params.begin(), params.end()}; }

} // namespace qtrader::diffnet
