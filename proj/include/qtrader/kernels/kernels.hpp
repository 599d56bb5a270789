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
#include <string_view>

/// Data-parallel inner loops shared by the statevector simulator and the dense layers.
///
/// Every kernel has a scalar reference implementation. When the CPU supports it an AVX2+FMA
/// variant is selected at runtime; both are exercised by the equivalence tests. Setting the
/// environment variable `QTRADER_SIMD=scalar` forces the reference path.
namespace qtrader::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    std::string_view name;

    // y = W x + b with W row-major [y.size() x x.size()].
    void (*matvec)(std::span<const double> w, std::span<const double> x, std::span<const double> b,
                   std::span<double> y);
    // gx += W^T g with W row-major [g.size() x gx.size()].
    void (*matvec_transpose_acc)(std::span<const double> w, std::span<const double> g,
                                 std::span<double> gx);
    // gw += g x^T with gw row-major [g.size() x x.size()].
    void (*outer_acc)(std::span<const double> g, std::span<const double> x, std::span<double> gw);

    // Statevector gates. amps.size() is 2^n; qubit 0 is the least significant index bit.
    void (*apply_ry)(std::span<cplx> amps, unsigned qubit, double theta);
    void (*apply_rz)(std::span<cplx> amps, unsigned qubit, double theta);
    void (*apply_cnot)(std::span<cplx> amps, unsigned control, unsigned target);
    // General single-qubit unitary, m row-major {m00, m01, m10, m11}.
    void (*apply_1q)(std::span<cplx> amps, unsigned qubit, const cplx *m);
    // out[q] = <Z_q> for q < out.size().
    void (*expect_z)(std::span<const cplx> amps, std::span<double> out);
    // sum_i |amps[i]|^2 * w[i]: the expectation of a diagonal observable.
    double (*expect_diagonal)(std::span<const cplx> amps, std::span<const double> w);
};

const KernelTable &scalar();

/// AVX2 table, or nullptr when the build or the running CPU lacks AVX2/FMA.
const KernelTable *avx2();

/// Best table for this process; resolved once.
const KernelTable &active();

} // namespace qtrader::kernels
