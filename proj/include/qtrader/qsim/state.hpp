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

#include <complex>
#include <span>
#include <vector>

#include "qtrader/kernels/kernels.hpp"

namespace qtrader::qsim {

using cplx = std::complex<double>;

inline constexpr unsigned kMaxQubits = 16;

/// Dense statevector over n qubits. Qubit 0 is the least significant bit of the basis index.
class QuantumState {
  public:
    /// |0...0>. Throws ConfigError unless 1 <= n_qubits <= kMaxQubits.
    explicit QuantumState(unsigned n_qubits, const kernels::KernelTable &kernels = kernels::active());

    [[nodiscard]] unsigned n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }
    [[nodiscard]] const kernels::KernelTable &kernels() const { return *kernels_; }

    /// Overwrites the amplitudes; the caller is responsible for normalization.
    void set_amplitudes(std::span<const cplx> amps);

    void apply_ry(unsigned qubit, double theta);
    void apply_rz(unsigned qubit, double theta);
    void apply_cnot(unsigned control, unsigned target);

    [[nodiscard]] double norm_squared() const;
    [[nodiscard]] std::vector<double> expect_z() const;

  private:
    void check_qubit(unsigned qubit) const;

    unsigned n_qubits_;
    std::vector<cplx> amps_;
    const kernels::KernelTable *kernels_;
};

inline QuantumState init_zero_state(unsigned n_qubits) { return QuantumState{n_qubits}; }

} // namespace qtrader::qsim
