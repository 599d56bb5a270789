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
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qtrader/diffnet/layers.hpp"
#include "qtrader/kernels/kernels.hpp"

namespace qtrader::diffnet {

/// Handle to a vector value recorded on a Tape.
struct Var {
    std::size_t id;
};

/// Reverse-mode recorder. Every op appends its output node and a backward closure; `backward`
/// replays the closures in exact reverse order, accumulating into node gradients and into the
/// `grad` buffers of the layers' Parameters (which callers zero between passes).
class Tape {
  public:
    explicit Tape(const kernels::KernelTable &kernels = kernels::active()) : kernels_(&kernels) {}

    Tape(const Tape &) = delete;
    Tape &operator=(const Tape &) = delete;

    /// Leaf value. Gradients are accumulated for every leaf and can be read back with grad().
    Var input(std::span<const double> value);
    Var constant(double value);

    Var dense(DenseLayer &layer, Var x);
    Var vqc(VqcLayer &layer, Var x);
    /// Returns (h, c).
    std::pair<Var, Var> lstm(LstmCell &cell, Var x, Var h, Var c);

    Var tanh(Var x);
    Var sigmoid(Var x);
    Var exp(Var x);
    Var softmax(Var x);
    Var log_softmax(Var x);

    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var scale(Var a, double k);
    Var square(Var a);
    Var sum(Var a);
    /// Scalar element x[index].
    Var pick(Var x, std::size_t index);

    [[nodiscard]] std::span<const double> value(Var v) const { return nodes_[v.id].value; }
    [[nodiscard]] double scalar(Var v) const;
    [[nodiscard]] std::span<const double> grad(Var v) const { return nodes_[v.id].grad; }

    /// Propagates d(loss)/d(loss) = loss_grad. `loss` must be a scalar node produced by a
    /// recorded op; throws UsageError otherwise or when nothing was recorded.
    void backward(Var loss, double loss_grad = 1.0);

    void clear();
    [[nodiscard]] std::size_t op_count() const { return ops_.size(); }
    /// Indices of ops in the order the last backward pass visited them.
    [[nodiscard]] const std::vector<std::size_t> &backward_trace() const { return trace_; }

  private:
    struct Node {
        std::vector<double> value;
        std::vector<double> grad;
    };
    using BackwardFn = std::function<void(Tape &)>;

    Var push(std::vector<double> value);
    void record(BackwardFn fn) { ops_.push_back(std::move(fn)); }
    std::vector<double> &g(Var v) { return nodes_[v.id].grad; }
    void check_same_size(Var a, Var b, const char *op) const;

    const kernels::KernelTable *kernels_;
    std::vector<Node> nodes_;
    std::vector<BackwardFn> ops_;
    std::vector<std::size_t> trace_;
};

} // namespace qtrader::diffnet
