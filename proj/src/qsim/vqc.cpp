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

#include "qtrader/qsim/vqc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"
#include "qtrader/qsim/state.hpp"

namespace qtrader::qsim {

VqcParams::VqcParams(unsigned n_qubits, unsigned depth)
    : n_qubits(n_qubits), depth(depth), angles(angle_count(n_qubits, depth), 0.0) {}

void VqcParams::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError(fmt::format("qubit count {} outside [1, {}]", n_qubits, kMaxQubits));
    }
    if (angles.size() != angle_count(n_qubits, depth)) {
        throw ConfigError(fmt::format("VQC expects {} angles for {} qubits x depth {}, got {}",
                                      angle_count(n_qubits, depth), n_qubits, depth, angles.size()));
    }
    for (double a : angles) {
        if (!std::isfinite(a)) {
            throw ConfigError("VQC angle is not finite");
        }
    }
}

namespace {

constexpr double kShift = std::numbers::pi / 2.0;

using Matrix2 = std::array<cplx, 4>;

Matrix2 ry_matrix(double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return {cplx{c, 0.0}, cplx{-s, 0.0}, cplx{s, 0.0}, cplx{c, 0.0}};
}

// RZ(b) * RY(a): the RY/RZ pair acting on one qubit within a layer.
Matrix2 layer_matrix(double a, double b) {
    const double c = std::cos(0.5 * a);
    const double s = std::sin(0.5 * a);
    const cplx e0 = std::polar(1.0, -0.5 * b);
    const cplx e1 = std::polar(1.0, 0.5 * b);
    return {e0 * c, -e0 * s, e1 * s, e1 * c};
}

/// Basis-index gather table of the CNOT ring CNOT(0,1) ... CNOT(n-1,0): out[i] = in[ring[i]].
const std::vector<std::uint32_t> &ring_permutation(unsigned n) {
    static std::array<std::once_flag, kMaxQubits + 1> once;
    static std::array<std::vector<std::uint32_t>, kMaxQubits + 1> tables;
    std::call_once(once[n], [n] {
        const std::size_t dim = std::size_t{1} << n;
        auto &table = tables[n];
        table.resize(dim);
        for (std::size_t b = 0; b < dim; ++b) {
            std::size_t f = b;
            for (unsigned q = 0; q < n; ++q) {
                const unsigned t = (q + 1) % n;
                f ^= ((f >> q) & 1U) << t;
            }
            table[f] = static_cast<std::uint32_t>(b);
        }
    });
    return tables[n];
}

/// The ansatz lowered to fused single-qubit unitaries and whole-ring permutations. Gates on
/// different qubits within one layer commute, so each qubit's RY and RZ fold into one matrix.
struct Op {
    bool ring = false;
    unsigned qubit = 0;
    Matrix2 m{};
    // Encoding op: input index. Layer op: (layer, qubit) for angle lookup.
    bool encoding = false;
    unsigned layer = 0;
};

struct Compiled {
    unsigned n = 0;
    std::vector<Op> ops;
    const std::vector<std::uint32_t> *ring = nullptr;
};

Compiled compile(std::span<const double> input, const VqcParams &params) {
    params.validate();
    if (input.size() != params.n_qubits) {
        throw UsageError(fmt::format("VQC input has {} entries, expected {}", input.size(), params.n_qubits));
    }
    Compiled c;
    c.n = params.n_qubits;
    c.ring = c.n > 1 ? &ring_permutation(c.n) : nullptr;
    c.ops.reserve(c.n + std::size_t{params.depth} * (c.n + 1));
    for (unsigned q = 0; q < c.n; ++q) {
        c.ops.push_back({false, q, ry_matrix(std::numbers::pi * input[q]), true, 0});
    }
    for (unsigned layer = 0; layer < params.depth; ++layer) {
        for (unsigned q = 0; q < c.n; ++q) {
            c.ops.push_back({false, q,
                             layer_matrix(params.angle(layer, q, Rotation::ry), params.angle(layer, q, Rotation::rz)),
                             false, layer});
        }
        if (c.ring) {
            c.ops.push_back({true, 0, {}, false, layer});
        }
    }
    return c;
}

class Simulator {
  public:
    Simulator(const Compiled &circuit, const kernels::KernelTable &kernels)
        : circuit_(circuit), kernels_(kernels), scratch_(std::size_t{1} << circuit.n) {}

    void apply(std::vector<cplx> &amps, const Op &op, const Matrix2 &m) {
        if (op.ring) {
            const auto &perm = *circuit_.ring;
            for (std::size_t i = 0; i < amps.size(); ++i) {
                scratch_[i] = amps[perm[i]];
            }
            amps.swap(scratch_);
        } else {
            kernels_.apply_1q(amps, op.qubit, m.data());
        }
    }
    void run(std::vector<cplx> &amps, std::size_t from) {
        for (std::size_t k = from; k < circuit_.ops.size(); ++k) {
            apply(amps, circuit_.ops[k], circuit_.ops[k].m);
        }
    }

  private:
    const Compiled &circuit_;
    const kernels::KernelTable &kernels_;
    std::vector<cplx> scratch_;
};

std::vector<cplx> zero_state(unsigned n) {
    std::vector<cplx> amps(std::size_t{1} << n, cplx{0.0, 0.0});
    amps[0] = 1.0;
    return amps;
}

} // namespace

std::vector<double> run_vqc(std::span<const double> input, const VqcParams &params,
                            const kernels::KernelTable &kernels) {
    const auto circuit = compile(input, params);
    Simulator sim(circuit, kernels);
    auto amps = zero_state(circuit.n);
    sim.run(amps, 0);
    std::vector<double> out(circuit.n);
    kernels.expect_z(amps, out);
    return out;
}

VqcGradients vqc_gradients(std::span<const double> input, const VqcParams &params, std::span<const double> upstream,
                           const kernels::KernelTable &kernels) {
    const auto circuit = compile(input, params);
    if (upstream.size() != params.n_qubits) {
        throw UsageError(
            fmt::format("VQC upstream gradient has {} entries, expected {}", upstream.size(), params.n_qubits));
    }
    VqcGradients out{std::vector<double>(params.angles.size(), 0.0), std::vector<double>(input.size(), 0.0)};
    if (std::all_of(upstream.begin(), upstream.end(), [](double u) { return u == 0.0; })) {
        return out;
    }

    // sum_i u_i <Z_i> is the expectation of one diagonal observable with these weights.
    const std::size_t dim = std::size_t{1} << circuit.n;
    std::vector<double> weights(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        double w = 0.0;
        for (unsigned q = 0; q < circuit.n; ++q) {
            w += ((b >> q) & 1U) != 0 ? -upstream[q] : upstream[q];
        }
        weights[b] = w;
    }

    Simulator sim(circuit, kernels);
    // prefix[k] is the state just before op k.
    std::vector<std::vector<cplx>> prefix;
    prefix.reserve(circuit.ops.size());
    auto state = zero_state(circuit.n);
    for (const auto &op : circuit.ops) {
        prefix.push_back(state);
        sim.apply(state, op, op.m);
    }

    std::vector<cplx> work(dim);
    auto shifted = [&](std::size_t at, const Matrix2 &m) {
        std::copy(prefix[at].begin(), prefix[at].end(), work.begin());
        sim.apply(work, circuit.ops[at], m);
        sim.run(work, at + 1);
        return kernels.expect_diagonal(work, weights);
    };

    for (std::size_t at = 0; at < circuit.ops.size(); ++at) {
        const Op &op = circuit.ops[at];
        if (op.ring) {
            continue;
        }
        if (op.encoding) {
            const double theta = std::numbers::pi * input[op.qubit];
            const double d = 0.5 * (shifted(at, ry_matrix(theta + kShift)) - shifted(at, ry_matrix(theta - kShift)));
            out.input[op.qubit] = std::numbers::pi * d;
            continue;
        }
        const auto iy = params.index(op.layer, op.qubit, Rotation::ry);
        const auto iz = params.index(op.layer, op.qubit, Rotation::rz);
        const double a = params.angles[iy];
        const double b = params.angles[iz];
        out.params[iy] = 0.5 * (shifted(at, layer_matrix(a + kShift, b)) - shifted(at, layer_matrix(a - kShift, b)));
        out.params[iz] = 0.5 * (shifted(at, layer_matrix(a, b + kShift)) - shifted(at, layer_matrix(a, b - kShift)));
    }
    return out;
}

} // namespace qtrader::qsim
