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

// AVX2+FMA variants. Functions carry a target attribute instead of building the whole translation
// unit with -mavx2, so no AVX-encoded inline/template code can leak into the scalar path.

#include <cmath>
#include <cstddef>
#include <memory>
#include <utility>

#include "qtrader/kernels/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define QTRADER_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace qtrader::kernels {

#ifdef QTRADER_HAVE_AVX2_KERNELS

#define QTRADER_AVX2 __attribute__((target("avx2,fma")))

namespace {

QTRADER_AVX2 double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

QTRADER_AVX2 void matvec(std::span<const double> w, std::span<const double> x, std::span<const double> b,
                         std::span<double> y) {
    const std::size_t rows = y.size();
    const std::size_t cols = x.size();
    const double *wp = w.data();
    const double *xp = x.data();
    for (std::size_t r = 0; r < rows; ++r) {
        const double *row = wp + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(xp + c), acc);
        }
        double tail = b.data()[r];
        for (; c < cols; ++c) {
            tail += row[c] * xp[c];
        }
        y.data()[r] = tail + hsum(acc);
    }
}

QTRADER_AVX2 void matvec_transpose_acc(std::span<const double> w, std::span<const double> g,
                                       std::span<double> gx) {
    const std::size_t rows = g.size();
    const std::size_t cols = gx.size();
    double *out = gx.data();
    for (std::size_t r = 0; r < rows; ++r) {
        const double *row = w.data() + r * cols;
        const __m256d gr = _mm256_set1_pd(g.data()[r]);
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            _mm256_storeu_pd(out + c, _mm256_fmadd_pd(_mm256_loadu_pd(row + c), gr, _mm256_loadu_pd(out + c)));
        }
        for (; c < cols; ++c) {
            out[c] += row[c] * g.data()[r];
        }
    }
}

QTRADER_AVX2 void outer_acc(std::span<const double> g, std::span<const double> x, std::span<double> gw) {
    const std::size_t rows = g.size();
    const std::size_t cols = x.size();
    const double *xp = x.data();
    for (std::size_t r = 0; r < rows; ++r) {
        double *row = gw.data() + r * cols;
        const __m256d gr = _mm256_set1_pd(g.data()[r]);
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            _mm256_storeu_pd(row + c, _mm256_fmadd_pd(gr, _mm256_loadu_pd(xp + c), _mm256_loadu_pd(row + c)));
        }
        for (; c < cols; ++c) {
            row[c] += g.data()[r] * xp[c];
        }
    }
}

// A __m256d holds two complex amplitudes: [re0 im0 re1 im1].

QTRADER_AVX2 void apply_ry(std::span<cplx> amps, unsigned qubit, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    auto *data = reinterpret_cast<double *>(amps.data());
    const std::size_t dim = amps.size();
    if (qubit == 0) {
        // Pair (a0, a1) shares one register; swap halves to reach the partner.
        const __m256d cv = _mm256_set1_pd(c);
        const __m256d sv = _mm256_setr_pd(-s, -s, s, s);
        for (std::size_t i = 0; i < dim; i += 2) {
            const __m256d v = _mm256_loadu_pd(data + 2 * i);
            const __m256d p = _mm256_permute2f128_pd(v, v, 1);
            _mm256_storeu_pd(data + 2 * i, _mm256_fmadd_pd(cv, v, _mm256_mul_pd(sv, p)));
        }
        return;
    }
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sv = _mm256_set1_pd(s);
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t block = 0; block < dim; block += 2 * stride) {
        for (std::size_t k = 0; k < stride; k += 2) {
            double *p0 = data + 2 * (block + k);
            double *p1 = data + 2 * (block + k + stride);
            const __m256d a0 = _mm256_loadu_pd(p0);
            const __m256d a1 = _mm256_loadu_pd(p1);
            _mm256_storeu_pd(p0, _mm256_fmsub_pd(cv, a0, _mm256_mul_pd(sv, a1)));
            _mm256_storeu_pd(p1, _mm256_fmadd_pd(sv, a0, _mm256_mul_pd(cv, a1)));
        }
    }
}

// v * (pr + i pi) for the two amplitudes in v, with per-lane phases.
QTRADER_AVX2 __m256d cmul(__m256d v, __m256d re, __m256d im_signed) {
    const __m256d swapped = _mm256_permute_pd(v, 0b0101);
    return _mm256_fmadd_pd(v, re, _mm256_mul_pd(swapped, im_signed));
}

QTRADER_AVX2 void apply_rz(std::span<cplx> amps, unsigned qubit, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    auto *data = reinterpret_cast<double *>(amps.data());
    const std::size_t dim = amps.size();
    // phase0 = c - i s, phase1 = c + i s. im_signed lanes are [-pi, +pi] per amplitude.
    const __m256d re = _mm256_set1_pd(c);
    if (qubit == 0) {
        const __m256d im = _mm256_setr_pd(s, -s, -s, s);
        for (std::size_t i = 0; i < dim; i += 2) {
            _mm256_storeu_pd(data + 2 * i, cmul(_mm256_loadu_pd(data + 2 * i), re, im));
        }
        return;
    }
    const __m256d im0 = _mm256_setr_pd(s, -s, s, -s);
    const __m256d im1 = _mm256_setr_pd(-s, s, -s, s);
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t block = 0; block < dim; block += 2 * stride) {
        for (std::size_t k = 0; k < stride; k += 2) {
            double *p0 = data + 2 * (block + k);
            double *p1 = data + 2 * (block + k + stride);
            _mm256_storeu_pd(p0, cmul(_mm256_loadu_pd(p0), re, im0));
            _mm256_storeu_pd(p1, cmul(_mm256_loadu_pd(p1), re, im1));
        }
    }
}

QTRADER_AVX2 void apply_cnot(std::span<cplx> amps, unsigned control, unsigned target) {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    auto *data = reinterpret_cast<double *>(amps.data());
    const std::size_t dim = amps.size();
    if (control == 0 || target == 0) {
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & cmask) != 0 && (i & tmask) == 0) {
                const std::size_t j = i | tmask;
                const __m128d a = _mm_loadu_pd(data + 2 * i);
                _mm_storeu_pd(data + 2 * i, _mm_loadu_pd(data + 2 * j));
                _mm_storeu_pd(data + 2 * j, a);
            }
        }
        return;
    }
    // Both bits above bit 0: index pairs (i, i+1) agree on control and target bits.
    for (std::size_t i = 0; i < dim; i += 2) {
        if ((i & cmask) != 0 && (i & tmask) == 0) {
            double *p0 = data + 2 * i;
            double *p1 = data + 2 * (i | tmask);
            const __m256d a = _mm256_loadu_pd(p0);
            _mm256_storeu_pd(p0, _mm256_loadu_pd(p1));
            _mm256_storeu_pd(p1, a);
        }
    }
}

// Broadcast complex multiplier for cmul: re and signed im lanes.
struct Splat {
    __m256d re;
    __m256d im;
};

QTRADER_AVX2 Splat splat(cplx m) {
    return {_mm256_set1_pd(m.real()), _mm256_setr_pd(-m.imag(), m.imag(), -m.imag(), m.imag())};
}

QTRADER_AVX2 void apply_1q(std::span<cplx> amps, unsigned qubit, const cplx *m) {
    auto *data = reinterpret_cast<double *>(amps.data());
    const std::size_t dim = amps.size();
    if (qubit == 0) {
        // v = [a0 a1], p = [a1 a0]: out = [m00 m11] * v + [m01 m10] * p lane-wise.
        const __m256d dre = _mm256_setr_pd(m[0].real(), m[0].real(), m[3].real(), m[3].real());
        const __m256d dim_ = _mm256_setr_pd(-m[0].imag(), m[0].imag(), -m[3].imag(), m[3].imag());
        const __m256d ore = _mm256_setr_pd(m[1].real(), m[1].real(), m[2].real(), m[2].real());
        const __m256d oim = _mm256_setr_pd(-m[1].imag(), m[1].imag(), -m[2].imag(), m[2].imag());
        for (std::size_t i = 0; i < dim; i += 2) {
            const __m256d v = _mm256_loadu_pd(data + 2 * i);
            const __m256d p = _mm256_permute2f128_pd(v, v, 1);
            _mm256_storeu_pd(data + 2 * i, _mm256_add_pd(cmul(v, dre, dim_), cmul(p, ore, oim)));
        }
        return;
    }
    const auto [r00, i00] = splat(m[0]);
    const auto [r01, i01] = splat(m[1]);
    const auto [r10, i10] = splat(m[2]);
    const auto [r11, i11] = splat(m[3]);
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t block = 0; block < dim; block += 2 * stride) {
        for (std::size_t k = 0; k < stride; k += 2) {
            double *p0 = data + 2 * (block + k);
            double *p1 = data + 2 * (block + k + stride);
            const __m256d a0 = _mm256_loadu_pd(p0);
            const __m256d a1 = _mm256_loadu_pd(p1);
            _mm256_storeu_pd(p0, _mm256_add_pd(cmul(a0, r00, i00), cmul(a1, r01, i01)));
            _mm256_storeu_pd(p1, _mm256_add_pd(cmul(a0, r10, i10), cmul(a1, r11, i11)));
        }
    }
}

QTRADER_AVX2 double expect_diagonal(std::span<const cplx> amps, std::span<const double> w) {
    const auto *data = reinterpret_cast<const double *>(amps.data());
    const std::size_t dim = amps.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= dim; i += 2) {
        const __m256d v = _mm256_loadu_pd(data + 2 * i);
        const __m256d wd = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w.data() + i)), 0b01010000);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), wd, acc);
    }
    double tail = 0.0;
    for (; i < dim; ++i) {
        tail += std::norm(amps[i]) * w[i];
    }
    return hsum(acc) + tail;
}

QTRADER_AVX2 void expect_z(std::span<const cplx> amps, std::span<double> out) {
    const auto *data = reinterpret_cast<const double *>(amps.data());
    const std::size_t dim = amps.size();
    const std::size_t nq = out.size();
    if (dim < 4) {
        scalar().expect_z(amps, out);
        return;
    }
    // Probabilities four at a time: |a|^2 = re^2 + im^2 via horizontal add of squared lanes.
    double probs_stack[256];
    double *probs = probs_stack;
    std::unique_ptr<double[]> heap;
    if (dim > 256) {
        heap.reset(new double[dim]);
        probs = heap.get();
    }
    for (std::size_t i = 0; i < dim; i += 4) {
        const __m256d v0 = _mm256_loadu_pd(data + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(data + 2 * i + 4);
        const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
        // hadd interleaves: [p0 p2 p1 p3]
        _mm256_storeu_pd(probs + i, _mm256_permute4x64_pd(h, 0b11011000));
    }
    for (std::size_t q = 0; q < nq; ++q) {
        const std::size_t stride = std::size_t{1} << q;
        if (stride < 4) {
            double acc = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                acc += ((i >> q) & 1U) != 0 ? -probs[i] : probs[i];
            }
            out.data()[q] = acc;
            continue;
        }
        __m256d plus = _mm256_setzero_pd();
        __m256d minus = _mm256_setzero_pd();
        for (std::size_t block = 0; block < dim; block += 2 * stride) {
            for (std::size_t k = 0; k < stride; k += 4) {
                plus = _mm256_add_pd(plus, _mm256_loadu_pd(probs + block + k));
                minus = _mm256_add_pd(minus, _mm256_loadu_pd(probs + block + stride + k));
            }
        }
        out.data()[q] = hsum(plus) - hsum(minus);
    }
}

bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

} // namespace

const KernelTable *avx2() {
    static const KernelTable table{
        Isa::avx2, "avx2", matvec, matvec_transpose_acc, outer_acc, apply_ry, apply_rz, apply_cnot, apply_1q, expect_z, expect_diagonal,
    };
    static const bool supported = cpu_has_avx2();
    return supported ? &table : nullptr;
}

#else

const KernelTable *avx2() { return nullptr; }

#endif

} // namespace qtrader::kernels
