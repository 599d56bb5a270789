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
#include <string_view>
#include <variant>
#include <vector>

#include "qtrader/diffnet/layers.hpp"
#include "qtrader/diffnet/parameter.hpp"
#include "qtrader/diffnet/tape.hpp"

namespace qtrader::a3c {

enum class HeadKind { classical, quantum };

HeadKind parse_head_kind(std::string_view name);
std::string_view to_string(HeadKind kind);

struct NetConfig {
    std::size_t observation_size = 0;
    HeadKind head = HeadKind::classical;
    /// Latent width; the qubit count in quantum mode.
    unsigned latent = 8;
    /// VQC depth (quantum mode only).
    unsigned depth = 2;
    std::size_t action_count = 3;
};

using Encoder = std::variant<diffnet::DenseLayer, diffnet::VqcLayer>;

/// Separate policy and value heads of identical shape:
///
///   policy:  z = tanh(W1 s + b1), q = encoder_pi(z), pi = softmax(W2 tanh(q) + b2)
///   value:   z = tanh(W3 s + b3), q = encoder_v(z),  V  = W4 tanh(q) + b4
///
/// The encoder is a VQC (quantum) or a dense latent->latent layer (classical).
class ActorCriticNet {
  public:
    explicit ActorCriticNet(const NetConfig &config);

    /// Dense layers uniform(+-1/sqrt(fan_in)), VQC angles uniform(+-0.1).
    void init(std::mt19937_64 &rng);

    [[nodiscard]] const NetConfig &config() const { return config_; }

    /// Action distribution. Throws UsageError on an observation of the wrong size.
    [[nodiscard]] std::vector<double> policy(std::span<const double> observation) const;
    [[nodiscard]] double value(std::span<const double> observation) const;

    struct Recorded {
        diffnet::Var log_probs;
        diffnet::Var value; // scalar
    };
    Recorded record(diffnet::Tape &tape, std::span<const double> observation);

    diffnet::ParameterList parameters();
    [[nodiscard]] diffnet::ConstParameterList parameters() const;
    [[nodiscard]] std::size_t parameter_count() const;
    [[nodiscard]] std::vector<double> flat_parameters() const;
    void set_flat_parameters(std::span<const double> theta);

    diffnet::DenseLayer policy_in;  // W1, b1
    Encoder policy_encoder;
    diffnet::DenseLayer policy_out; // W2, b2
    diffnet::DenseLayer value_in;   // W3, b3
    Encoder value_encoder;
    diffnet::DenseLayer value_out;  // W4, b4

  private:
    void check_observation(std::span<const double> observation) const;

    NetConfig config_;
};

/// Index of the largest probability; ties go to the lowest index.
std::size_t greedy_action(std::span<const double> probs);

} // namespace qtrader::a3c
