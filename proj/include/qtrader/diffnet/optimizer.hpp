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
#include <span>
#include <string_view>
#include <vector>

namespace qtrader::diffnet {

enum class OptimizerKind { adam, sgd };

OptimizerKind parse_optimizer_kind(std::string_view name);
std::string_view to_string(OptimizerKind kind);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First-order optimizer over a flat parameter vector. SGD is the literal theta <- theta - lr * g.
class Optimizer {
  public:
    Optimizer(OptimizerConfig config, std::size_t size);

    /// Throws UsageError on a size mismatch.
    void step(std::span<double> params, std::span<const double> grads);

    [[nodiscard]] const OptimizerConfig &config() const { return config_; }
    [[nodiscard]] std::size_t steps() const { return steps_; }

  private:
    OptimizerConfig config_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::size_t steps_ = 0;
};

/// Rescales `grads` in place so its L2 norm is at most max_norm; returns the original norm.
double clip_global_norm(std::span<double> grads, double max_norm);

} // namespace qtrader::diffnet
