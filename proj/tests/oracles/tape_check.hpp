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

// Finite-difference check of everything a tape computes: parameter gradients accumulated by
// backward() and the gradient reaching the input node, both against central differences.

#include <oracles/finite_diff.hpp>

#include <qtrader/diffnet/parameter.hpp>
#include <qtrader/diffnet/tape.hpp>

#include <algorithm>
#include <functional>
#include <vector>

namespace oracle {

using TapeBuilder = std::function<qtrader::diffnet::Var(qtrader::diffnet::Tape &, qtrader::diffnet::Var)>;

struct TapeCheck {
    double abs_err = 0; // max |analytic - numeric|
    double rel_err = 0; // max mixed_error(analytic, numeric)
};

inline TapeCheck check_tape_gradients(const qtrader::diffnet::ParameterList &params, std::vector<double> x,
                                      const TapeBuilder &build, double h = 1e-5) {
    namespace dn = qtrader::diffnet;
    dn::zero_grads(params);
    std::vector<double> gx;
    {
        dn::Tape tape;
        const dn::Var in = tape.input(x);
        tape.backward(build(tape, in));
        gx.assign(tape.grad(in).begin(), tape.grad(in).end());
    }
    const auto analytic = dn::flatten_grads(dn::as_const(params));
    auto theta = dn::flatten_values(dn::as_const(params));
    auto eval = [&] {
        dn::assign_values(params, theta);
        dn::Tape tape;
        return tape.scalar(build(tape, tape.input(x)));
    };
    const auto fd_theta = central_gradient(theta, eval, h);
    const auto fd_x = central_gradient(x, eval, h);
    dn::assign_values(params, theta);

    TapeCheck r;
    auto fold = [&](double a, double f) {
        r.abs_err = std::max(r.abs_err, std::abs(a - f));
        r.rel_err = std::max(r.rel_err, mixed_error(a, f));
    };
    for (std::size_t i = 0; i < fd_theta.size(); ++i) {
        fold(analytic[i], fd_theta[i]);
    }
    for (std::size_t i = 0; i < fd_x.size(); ++i) {
        fold(gx[i], fd_x[i]);
    }
    return r;
}

} // namespace oracle
