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

#include "qtrader/diffnet/layers.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"

namespace qtrader::diffnet {

DenseLayer::DenseLayer(std::size_t in, std::size_t out, std::string name)
    : weight(name + ".weight", {out, in}), bias(name + ".bias", {out}), in_(in), out_(out) {}

void DenseLayer::init(std::mt19937_64 &rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_));
    weight.fill_uniform(rng, -bound, bound);
    bias.fill_uniform(rng, -bound, bound);
}

std::vector<double> DenseLayer::forward(std::span<const double> x, const kernels::KernelTable &kernels) const {
    if (x.size() != in_) {
        throw UsageError(fmt::format("{}: input has {} entries, expected {}", weight.name, x.size(), in_));
    }
    std::vector<double> y(out_);
    kernels.matvec(weight.value, x, bias.value, y);
    return y;
}

VqcLayer::VqcLayer(unsigned n_qubits, unsigned depth, std::string name)
    : angles(std::move(name) + ".angles", {depth, n_qubits, 2}), n_qubits_(n_qubits), depth_(depth) {}

void VqcLayer::init(std::mt19937_64 &rng) { angles.fill_uniform(rng, -0.1, 0.1); }

qsim::VqcParams VqcLayer::params() const {
    qsim::VqcParams p{n_qubits_, depth_};
    p.angles = angles.value;
    return p;
}

std::vector<double> VqcLayer::forward(std::span<const double> x) const { return qsim::run_vqc(x, params()); }

LstmCell::LstmCell(std::size_t in, std::size_t hidden, std::string name)
    : weight(name + ".weight", {4 * hidden, in + hidden}), bias(name + ".bias", {4 * hidden}), in_(in),
      hidden_(hidden), h_(hidden, 0.0), c_(hidden, 0.0) {}

void LstmCell::init(std::mt19937_64 &rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_));
    weight.fill_uniform(rng, -bound, bound);
    bias.fill_uniform(rng, -bound, bound);
    for (std::size_t k = 0; k < hidden_; ++k) {
        bias.value[hidden_ + k] = 1.0;
    }
}

std::vector<double> LstmCell::step(std::span<const double> x) {
    auto cache = lstm_forward(*this, x, h_, c_);
    h_ = std::move(cache.h);
    c_ = std::move(cache.c);
    return h_;
}

void LstmCell::reset_state() {
    std::fill(h_.begin(), h_.end(), 0.0);
    std::fill(c_.begin(), c_.end(), 0.0);
}

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

} // namespace

LstmStepCache lstm_forward(const LstmCell &cell, std::span<const double> x, std::span<const double> h_prev,
                           std::span<const double> c_prev, const kernels::KernelTable &kernels) {
    const std::size_t hidden = cell.hidden();
    if (x.size() != cell.in() || h_prev.size() != hidden || c_prev.size() != hidden) {
        throw UsageError(fmt::format("{}: step expects input {} and state {}, got {} / {} / {}", cell.weight.name,
                                     cell.in(), hidden, x.size(), h_prev.size(), c_prev.size()));
    }
    LstmStepCache cache;
    cache.concat.reserve(x.size() + hidden);
    cache.concat.insert(cache.concat.end(), x.begin(), x.end());
    cache.concat.insert(cache.concat.end(), h_prev.begin(), h_prev.end());
    cache.c_prev.assign(c_prev.begin(), c_prev.end());

    cache.gates.resize(4 * hidden);
    kernels.matvec(cell.weight.value, cache.concat, cell.bias.value, cache.gates);
    for (std::size_t k = 0; k < 3 * hidden; ++k) {
        cache.gates[k] = sigmoid(cache.gates[k]);
    }
    for (std::size_t k = 3 * hidden; k < 4 * hidden; ++k) {
        cache.gates[k] = std::tanh(cache.gates[k]);
    }

    cache.c.resize(hidden);
    cache.tanh_c.resize(hidden);
    cache.h.resize(hidden);
    for (std::size_t k = 0; k < hidden; ++k) {
        const double i = cache.gates[k];
        const double f = cache.gates[hidden + k];
        const double o = cache.gates[2 * hidden + k];
        const double g = cache.gates[3 * hidden + k];
        cache.c[k] = f * c_prev[k] + i * g;
        cache.tanh_c[k] = std::tanh(cache.c[k]);
        cache.h[k] = o * cache.tanh_c[k];
    }
    return cache;
}

std::vector<double> tanh_forward(std::span<const double> x) {
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(), [](double v) { return std::tanh(v); });
    return y;
}

std::vector<double> sigmoid_forward(std::span<const double> x) {
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(), sigmoid);
    return y;
}

std::vector<double> softmax(std::span<const double> x) {
    if (x.empty()) {
        throw UsageError("softmax of an empty vector");
    }
    const double peak = *std::max_element(x.begin(), x.end());
    std::vector<double> y(x.size());
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = std::exp(x[i] - peak);
        total += y[i];
    }
    for (auto &v : y) {
        v /= total;
    }
    return y;
}

std::vector<double> log_softmax(std::span<const double> x) {
    if (x.empty()) {
        throw UsageError("log_softmax of an empty vector");
    }
    const double peak = *std::max_element(x.begin(), x.end());
    double total = 0.0;
    for (double v : x) {
        total += std::exp(v - peak);
    }
    const double log_z = peak + std::log(total);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] - log_z;
    }
    return y;
}

std::size_t categorical_sample(std::span<const double> probs, std::mt19937_64 &rng) {
    if (probs.empty()) {
        throw UsageError("categorical_sample: empty distribution");
    }
    double total = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0) {
            throw UsageError(fmt::format("categorical_sample: invalid probability {}", p));
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw UsageError(fmt::format("categorical_sample: probabilities sum to {}", total));
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) {
            last_positive = i;
            cumulative += probs[i];
            if (u < cumulative) {
                return i;
            }
        }
    }
    return last_positive;
}

} // namespace qtrader::diffnet
