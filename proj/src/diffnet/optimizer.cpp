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

#include "qtrader/diffnet/optimizer.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"

namespace qtrader::diffnet {

OptimizerKind parse_optimizer_kind(std::string_view name) {
    if (name == "adam") {
        return OptimizerKind::adam;
    }
    if (name == "sgd") {
        return OptimizerKind::sgd;
    }
    throw ConfigError(fmt::format("unknown optimizer '{}'", name));
}

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::adam ? "adam" : "sgd"; }

Optimizer::Optimizer(OptimizerConfig config, std::size_t size) : config_(config) {
    if (!(config_.learning_rate > 0.0) || !std::isfinite(config_.learning_rate)) {
        throw ConfigError(fmt::format("learning rate must be positive, got {}", config_.learning_rate));
    }
    if (config_.kind == OptimizerKind::adam) {
        m_.assign(size, 0.0);
        v_.assign(size, 0.0);
    }
}

void Optimizer::step(std::span<double> params, std::span<const double> grads) {
    if (params.size() != grads.size()) {
        throw UsageError(fmt::format("optimizer step: {} params vs {} grads", params.size(), grads.size()));
    }
    ++steps_;
    const double lr = config_.learning_rate;
    if (config_.kind == OptimizerKind::sgd) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i] -= lr * grads[i];
        }
        return;
    }
    if (m_.size() != params.size()) {
        throw UsageError(fmt::format("optimizer sized for {} params, got {}", m_.size(), params.size()));
    }
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = b1 * m_[i] + (1.0 - b1) * grads[i];
        v_[i] = b2 * v_[i] + (1.0 - b2) * grads[i] * grads[i];
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
}

double clip_global_norm(std::span<double> grads, double max_norm) {
    double sq = 0.0;
    for (double g : grads) {
        sq += g * g;
    }
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double k = max_norm / norm;
        for (auto &g : grads) {
            g *= k;
        }
    }
    return norm;
}

} // namespace qtrader::diffnet
