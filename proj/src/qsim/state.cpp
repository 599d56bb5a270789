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

#include "qtrader/qsim/state.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"

namespace qtrader::qsim {

QuantumState::QuantumState(unsigned n_qubits, const kernels::KernelTable &kernels)
    : n_qubits_(n_qubits), kernels_(&kernels) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError(fmt::format("qubit count {} outside [1, {}]", n_qubits, kMaxQubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

void QuantumState::set_amplitudes(std::span<const cplx> amps) {
    if (amps.size() != amps_.size()) {
        throw UsageError(fmt::format("expected {} amplitudes, got {}", amps_.size(), amps.size()));
    }
    std::copy(amps.begin(), amps.end(), amps_.begin());
}

void QuantumState::check_qubit(unsigned qubit) const {
    if (qubit >= n_qubits_) {
        throw UsageError(fmt::format("qubit {} out of range for {}-qubit state", qubit, n_qubits_));
    }
}

void QuantumState::apply_ry(unsigned qubit, double theta) {
    check_qubit(qubit);
    kernels_->apply_ry(amps_, qubit, theta);
}

void QuantumState::apply_rz(unsigned qubit, double theta) {
    check_qubit(qubit);
    kernels_->apply_rz(amps_, qubit, theta);
}

void QuantumState::apply_cnot(unsigned control, unsigned target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw UsageError(fmt::format("CNOT control and target are both qubit {}", control));
    }
    kernels_->apply_cnot(amps_, control, target);
}

double QuantumState::norm_squared() const {
    double acc = 0.0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

std::vector<double> QuantumState::expect_z() const {
    std::vector<double> out(n_qubits_);
    kernels_->expect_z(amps_, out);
    return out;
}

} // namespace qtrader::qsim
