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

#include <cmath>
#include <cstddef>
#include <utility>

#include "qtrader/kernels/kernels.hpp"

namespace qtrader::kernels {

namespace {

void matvec(std::span<const double> w, std::span<const double> x, std::span<const double> b,
            std::span<double> y) {
    const std::size_t cols = x.size();
    for (std::size_t r = 0; r < y.size(); ++r) {
        double acc = b[r];
        const double *row = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) {
            acc += row[c] * x[c];
        }
        y[r] = acc;
    }
}

void matvec_transpose_acc(std::span<const double> w, std::span<const double> g, std::span<double> gx) {
    const std::size_t cols = gx.size();
    for (std::size_t r = 0; r < g.size(); ++r) {
        const double *row = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) {
            gx[c] += row[c] * g[r];
        }
    }
}

void outer_acc(std::span<const double> g, std::span<const double> x, std::span<double> gw) {
    const std::size_t cols = x.size();
    for (std::size_t r = 0; r < g.size(); ++r) {
        double *row = gw.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) {
            row[c] += g[r] * x[c];
        }
    }
}

void apply_ry(std::span<cplx> amps, unsigned qubit, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
        for (std::size_t k = 0; k < stride; ++k) {
            const cplx a0 = amps[block + k];
            const cplx a1 = amps[block + k + stride];
            amps[block + k] = {c * a0.real() - s * a1.real(), c * a0.imag() - s * a1.imag()};
            amps[block + k + stride] = {s * a0.real() + c * a1.real(), s * a0.imag() + c * a1.imag()};
        }
    }
}

void apply_rz(std::span<cplx> amps, unsigned qubit, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
        for (std::size_t k = 0; k < stride; ++k) {
            // e^{-i theta/2} on |0>, e^{+i theta/2} on |1>
            cplx &a0 = amps[block + k];
            cplx &a1 = amps[block + k + stride];
            a0 = {a0.real() * c + a0.imag() * s, a0.imag() * c - a0.real() * s};
            a1 = {a1.real() * c - a1.imag() * s, a1.imag() * c + a1.real() * s};
        }
    }
}

void apply_cnot(std::span<cplx> amps, unsigned control, unsigned target) {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cmask) != 0 && (i & tmask) == 0) {
            std::swap(amps[i], amps[i | tmask]);
        }
    }
}

void apply_1q(std::span<cplx> amps, unsigned qubit, const cplx *m) {
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
        for (std::size_t k = 0; k < stride; ++k) {
            const cplx a0 = amps[block + k];
            const cplx a1 = amps[block + k + stride];
            // Written out by hand: std::complex operator* goes through the Annex G NaN path.
            amps[block + k] = {m[0].real() * a0.real() - m[0].imag() * a0.imag() + m[1].real() * a1.real() -
                                   m[1].imag() * a1.imag(),
                               m[0].real() * a0.imag() + m[0].imag() * a0.real() + m[1].real() * a1.imag() +
                                   m[1].imag() * a1.real()};
            amps[block + k + stride] = {m[2].real() * a0.real() - m[2].imag() * a0.imag() + m[3].real() * a1.real() -
                                            m[3].imag() * a1.imag(),
                                        m[2].real() * a0.imag() + m[2].imag() * a0.real() + m[3].real() * a1.imag() +
                                            m[3].imag() * a1.real()};
        }
    }
}

double expect_diagonal(std::span<const cplx> amps, std::span<const double> w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]) * w[i];
    }
    return acc;
}

void expect_z(std::span<const cplx> amps, std::span<double> out) {
    for (auto &v : out) {
        v = 0.0;
    }
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        for (std::size_t q = 0; q < out.size(); ++q) {
            out[q] += ((i >> q) & 1U) != 0 ? -p : p;
        }
    }
}

} // namespace

const KernelTable &scalar() {
    static const KernelTable table{
        Isa::scalar, "scalar", matvec, matvec_transpose_acc, outer_acc, apply_ry, apply_rz, apply_cnot, apply_1q, expect_z, expect_diagonal,
    };
    return table;
}

} // namespace qtrader::kernels
