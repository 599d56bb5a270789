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

#include <doctest.h>

#include <qtrader/kernels/kernels.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace qtrader::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (auto &x : v) {
        x = d(rng);
    }
    return v;
}

std::vector<cplx> random_state(std::mt19937_64 &rng, unsigned n) {
    std::normal_distribution<double> d;
    std::vector<cplx> v(std::size_t{1} << n);
    double norm = 0;
    for (auto &a : v) {
        a = {d(rng), d(rng)};
        norm += std::norm(a);
    }
    for (auto &a : v) {
        a /= std::sqrt(norm);
    }
    return v;
}

double max_diff(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

double max_diff(const std::vector<double> &a, const std::vector<double> &b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace

TEST_CASE("active table honours the environment override") {
    const char *env = std::getenv("QTRADER_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") {
        CHECK(active().isa == Isa::scalar);
    }
    CHECK(scalar().isa == Isa::scalar);
}

TEST_CASE("avx2 dense kernels match the scalar reference") {
    const KernelTable *v = avx2();
    if (v == nullptr) {
        MESSAGE("avx2 unavailable; skipping");
        return;
    }
    const KernelTable &s = scalar();
    std::mt19937_64 rng(11);
    for (std::size_t rows : {1U, 3U, 4U, 7U, 16U}) {
        for (std::size_t cols : {1U, 2U, 5U, 8U, 13U, 33U}) {
            auto w = random_vec(rng, rows * cols);
            auto x = random_vec(rng, cols);
            auto b = random_vec(rng, rows);
            std::vector<double> ys(rows), yv(rows);
            s.matvec(w, x, b, ys);
            v->matvec(w, x, b, yv);
            CHECK(max_diff(ys, yv) < 1e-12);

            auto g = random_vec(rng, rows);
            auto gxs = random_vec(rng, cols);
            auto gxv = gxs;
            s.matvec_transpose_acc(w, g, gxs);
            v->matvec_transpose_acc(w, g, gxv);
            CHECK(max_diff(gxs, gxv) < 1e-12);

            auto gws = random_vec(rng, rows * cols);
            auto gwv = gws;
            s.outer_acc(g, x, gws);
            v->outer_acc(g, x, gwv);
            CHECK(max_diff(gws, gwv) < 1e-12);
        }
    }
}

TEST_CASE("avx2 state kernels match the scalar reference") {
    const KernelTable *v = avx2();
    if (v == nullptr) {
        MESSAGE("avx2 unavailable; skipping");
        return;
    }
    const KernelTable &s = scalar();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-4, 4);
    for (unsigned n = 1; n <= 7; ++n) {
        for (unsigned q = 0; q < n; ++q) {
            const double th = angle(rng);
            auto a = random_state(rng, n);
            auto b = a;
            s.apply_ry(a, q, th);
            v->apply_ry(b, q, th);
            CHECK(max_diff(a, b) < 1e-14);
            s.apply_rz(a, q, th);
            v->apply_rz(b, q, th);
            CHECK(max_diff(a, b) < 1e-14);

            cplx m[4] = {{angle(rng), angle(rng)}, {angle(rng), angle(rng)}, {angle(rng), angle(rng)},
                         {angle(rng), angle(rng)}};
            s.apply_1q(a, q, m);
            v->apply_1q(b, q, m);
            CHECK(max_diff(a, b) < 1e-12);

            b = a; // a permutation must be exact, so start both from identical amplitudes
            for (unsigned t = 0; t < n; ++t) {
                if (t == q) {
                    continue;
                }
                s.apply_cnot(a, q, t);
                v->apply_cnot(b, q, t);
                CHECK(max_diff(a, b) == 0.0);
            }

            std::vector<double> zs(n), zv(n);
            s.expect_z(a, zs);
            v->expect_z(a, zv);
            CHECK(max_diff(zs, zv) < 1e-13);

            auto w = random_vec(rng, a.size());
            CHECK(std::abs(s.expect_diagonal(a, w) - v->expect_diagonal(a, w)) < 1e-12);
        }
    }
}

TEST_CASE("apply_1q with the RY matrix equals apply_ry") {
    std::mt19937_64 rng(3);
    const KernelTable &k = active();
    for (unsigned q = 0; q < 4; ++q) {
        auto a = random_state(rng, 4);
        auto b = a;
        const double th = 0.7 + q;
        const double c = std::cos(th / 2), s = std::sin(th / 2);
        const cplx m[4] = {c, -s, s, c};
        k.apply_ry(a, q, th);
        k.apply_1q(b, q, m);
        CHECK(max_diff(a, b) < 1e-14);
    }
}

TEST_CASE("expect_diagonal with +-1 weights equals expect_z") {
    std::mt19937_64 rng(4);
    const KernelTable &k = active();
    auto a = random_state(rng, 5);
    std::vector<double> z(5);
    k.expect_z(a, z);
    for (unsigned q = 0; q < 5; ++q) {
        std::vector<double> w(a.size());
        for (std::size_t b = 0; b < w.size(); ++b) {
            w[b] = ((b >> q) & 1U) ? -1.0 : 1.0;
        }
        CHECK(k.expect_diagonal(a, w) == doctest::Approx(z[q]).epsilon(1e-13));
    }
}
