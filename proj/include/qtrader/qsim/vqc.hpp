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
#include <vector>

#include "qtrader/kernels/kernels.hpp"

namespace qtrader::qsim {

enum class Rotation : std::size_t { ry = 0, rz = 1 };

/// Trainable angles of the hardware-efficient ansatz, laid out as [depth][n_qubits][2] with the
/// innermost index selecting RY (0) or RZ (1).
struct VqcParams {
    unsigned n_qubits = 8;
    unsigned depth = 2;
    std::vector<double> angles;

    VqcParams() : VqcParams(8, 2) {}
    VqcParams(unsigned n_qubits, unsigned depth);

    [[nodiscard]] static std::size_t angle_count(unsigned n_qubits, unsigned depth) {
        return std::size_t{depth} * n_qubits * 2;
    }
    [[nodiscard]] std::size_t index(unsigned layer, unsigned qubit, Rotation kind) const {
        return (std::size_t{layer} * n_qubits + qubit) * 2 + static_cast<std::size_t>(kind);
    }
    double &angle(unsigned layer, unsigned qubit, Rotation kind) { return angles[index(layer, qubit, kind)]; }
    [[nodiscard]] double angle(unsigned layer, unsigned qubit, Rotation kind) const {
        return angles[index(layer, qubit, kind)];
    }

    /// Throws ConfigError on an out-of-range qubit count, a shape mismatch or non-finite angles.
    void validate() const;
};

/// Runs the circuit
///
///   RY(pi * x_i) on every qubit, then `depth` times:
///   RY(a) RZ(b) on every qubit followed by the ring CNOT(i, (i+1) mod n)
///
/// and returns <Z_i> for every qubit. Throws UsageError if input.size() != n_qubits.
std::vector<double> run_vqc(std::span<const double> input, const VqcParams &params,
                            const kernels::KernelTable &kernels = kernels::active());

struct VqcGradients {
    std::vector<double> params; // same layout as VqcParams::angles
    std::vector<double> input;  // d/dx_i, includes the pi factor of the encoding
};

/// Parameter-shift gradients of sum_i upstream[i] * <Z_i>.
///
/// Each shifted evaluation resumes from a cached copy of the state just before the shifted gate,
/// so only the circuit suffix is re-simulated.
VqcGradients vqc_gradients(std::span<const double> input, const VqcParams &params, std::span<const double> upstream,
                           const kernels::KernelTable &kernels = kernels::active());

} // namespace qtrader::qsim
