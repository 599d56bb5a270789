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
#include <vector>

#include "qtrader/diffnet/parameter.hpp"
#include "qtrader/kernels/kernels.hpp"
#include "qtrader/qsim/vqc.hpp"

namespace qtrader::diffnet {

/// y = W x + b with W stored [out x in].
class DenseLayer {
  public:
    DenseLayer() = default;
    DenseLayer(std::size_t in, std::size_t out, std::string name = "dense");

    [[nodiscard]] std::size_t in() const { return in_; }
    [[nodiscard]] std::size_t out() const { return out_; }

    /// uniform(-1/sqrt(in), 1/sqrt(in)) for weights and bias.
    void init(std::mt19937_64 &rng);

    /// Throws UsageError when x.size() != in().
    [[nodiscard]] std::vector<double> forward(std::span<const double> x,
                                              const kernels::KernelTable &kernels = kernels::active()) const;

    Parameter weight;
    Parameter bias;

  private:
    std::size_t in_ = 0;
    std::size_t out_ = 0;
};

/// Trainable variational circuit used as a layer: x in (-1, 1)^n -> <Z> in [-1, 1]^n.
class VqcLayer {
  public:
    VqcLayer() = default;
    VqcLayer(unsigned n_qubits, unsigned depth, std::string name = "vqc");

    [[nodiscard]] unsigned n_qubits() const { return n_qubits_; }
    [[nodiscard]] unsigned depth() const { return depth_; }

    /// uniform(-0.1, 0.1) angles.
    void init(std::mt19937_64 &rng);

    [[nodiscard]] qsim::VqcParams params() const;
    [[nodiscard]] std::vector<double> forward(std::span<const double> x) const;

    Parameter angles;

  private:
    unsigned n_qubits_ = 0;
    unsigned depth_ = 0;
};

/// Single-layer LSTM cell. Gate rows of `weight` are stacked [input; forget; output; candidate], each
/// block [hidden x (in + hidden)] acting on the concatenation [x; h].
class LstmCell {
  public:
    LstmCell() = default;
    LstmCell(std::size_t in, std::size_t hidden, std::string name = "lstm");

    [[nodiscard]] std::size_t in() const { return in_; }
    [[nodiscard]] std::size_t hidden() const { return hidden_; }

    /// uniform(-1/sqrt(hidden), 1/sqrt(hidden)) with forget-gate bias 1.0.
    void init(std::mt19937_64 &rng);

    /// Advances the stored (h, c) by one input and returns the new h.
    std::vector<double> step(std::span<const double> x);
    void reset_state();

    [[nodiscard]] std::span<const double> h() const { return h_; }
    [[nodiscard]] std::span<const double> c() const { return c_; }

    Parameter weight;
    Parameter bias;

  private:
    std::size_t in_ = 0;
    std::size_t hidden_ = 0;
    std::vector<double> h_;
    std::vector<double> c_;
};

/// Gate activations and new cell state for one LSTM step; shared by the stateful cell and the tape.
struct LstmStepCache {
    std::vector<double> concat; // [x; h_prev]
    std::vector<double> c_prev;
    std::vector<double> gates;  // activated i, f, o, g (4 * hidden)
    std::vector<double> c;
    std::vector<double> tanh_c;
    std::vector<double> h;
};

LstmStepCache lstm_forward(const LstmCell &cell, std::span<const double> x, std::span<const double> h_prev,
                           std::span<const double> c_prev, const kernels::KernelTable &kernels = kernels::active());

std::vector<double> tanh_forward(std::span<const double> x);
std::vector<double> sigmoid_forward(std::span<const double> x);
/// Max-subtracted softmax; sums to one for any finite input.
std::vector<double> softmax(std::span<const double> x);
std::vector<double> log_softmax(std::span<const double> x);

/// Draws index i with probability probs[i]. Throws UsageError for negative, non-finite or
/// unnormalized (|sum - 1| > 1e-9) input.
std::size_t categorical_sample(std::span<const double> probs, std::mt19937_64 &rng);

} // namespace qtrader::diffnet
