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

#include "qtrader/diffnet/tape.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"
#include "qtrader/qsim/vqc.hpp"

namespace qtrader::diffnet {

Var Tape::push(std::vector<double> value) {
    const std::size_t n = value.size();
    nodes_.push_back({std::move(value), std::vector<double>(n, 0.0)});
    return Var{nodes_.size() - 1};
}

void Tape::check_same_size(Var a, Var b, const char *op) const {
    if (nodes_[a.id].value.size() != nodes_[b.id].value.size()) {
        throw UsageError(fmt::format("tape {}: operand sizes {} and {} differ", op, nodes_[a.id].value.size(),
                                     nodes_[b.id].value.size()));
    }
}

double Tape::scalar(Var v) const {
    if (nodes_[v.id].value.size() != 1) {
        throw UsageError(fmt::format("tape node {} is not a scalar", v.id));
    }
    return nodes_[v.id].value[0];
}

Var Tape::input(std::span<const double> value) { return push({value.begin(), value.end()}); }

Var Tape::constant(double value) { return push({value}); }

Var Tape::dense(DenseLayer &layer, Var x) {
    auto y = layer.forward(value(x), *kernels_);
    const Var out = push(std::move(y));
    record([&layer, x, out](Tape &t) {
        const auto &gy = t.nodes_[out.id].grad;
        const auto &xv = t.nodes_[x.id].value;
        t.kernels_->outer_acc(gy, xv, layer.weight.grad);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            layer.bias.grad[i] += gy[i];
        }
        t.kernels_->matvec_transpose_acc(layer.weight.value, gy, t.g(x));
    });
    return out;
}

Var Tape::vqc(VqcLayer &layer, Var x) {
    const Var out = push(layer.forward(value(x)));
    record([&layer, x, out](Tape &t) {
        const auto grads = qsim::vqc_gradients(t.nodes_[x.id].value, layer.params(), t.nodes_[out.id].grad);
        for (std::size_t i = 0; i < grads.params.size(); ++i) {
            layer.angles.grad[i] += grads.params[i];
        }
        auto &gx = t.g(x);
        for (std::size_t i = 0; i < grads.input.size(); ++i) {
            gx[i] += grads.input[i];
        }
    });
    return out;
}

std::pair<Var, Var> Tape::lstm(LstmCell &cell, Var x, Var h, Var c) {
    auto cache = lstm_forward(cell, value(x), value(h), value(c), *kernels_);
    const Var h_out = push(cache.h);
    const Var c_out = push(cache.c);
    record([&cell, x, h, c, h_out, c_out, cache = std::move(cache)](Tape &t) {
        const std::size_t hidden = cell.hidden();
        const std::size_t in = cell.in();
        const auto &dh = t.nodes_[h_out.id].grad;
        const auto &dc_out = t.nodes_[c_out.id].grad;
        std::vector<double> dgates(4 * hidden);
        auto &dc_prev = t.g(c);
        for (std::size_t k = 0; k < hidden; ++k) {
            const double i = cache.gates[k];
            const double f = cache.gates[hidden + k];
            const double o = cache.gates[2 * hidden + k];
            const double gc = cache.gates[3 * hidden + k];
            const double tc = cache.tanh_c[k];
            const double dc = dc_out[k] + dh[k] * o * (1.0 - tc * tc);
            dgates[k] = dc * gc * i * (1.0 - i);
            dgates[hidden + k] = dc * cache.c_prev[k] * f * (1.0 - f);
            dgates[2 * hidden + k] = dh[k] * tc * o * (1.0 - o);
            dgates[3 * hidden + k] = dc * i * (1.0 - gc * gc);
            dc_prev[k] += dc * f;
        }
        t.kernels_->outer_acc(dgates, cache.concat, cell.weight.grad);
        for (std::size_t k = 0; k < dgates.size(); ++k) {
            cell.bias.grad[k] += dgates[k];
        }
        std::vector<double> dconcat(in + hidden, 0.0);
        t.kernels_->matvec_transpose_acc(cell.weight.value, dgates, dconcat);
        auto &dx = t.g(x);
        auto &dh_prev = t.g(h);
        for (std::size_t k = 0; k < in; ++k) {
            dx[k] += dconcat[k];
        }
        for (std::size_t k = 0; k < hidden; ++k) {
            dh_prev[k] += dconcat[in + k];
        }
    });
    return {h_out, c_out};
}

Var Tape::tanh(Var x) {
    const Var out = push(tanh_forward(value(x)));
    record([x, out](Tape &t) {
        const auto &y = t.nodes_[out.id].value;
        const auto &gy = t.nodes_[out.id].grad;
        auto &gx = t.g(x);
        for (std::size_t i = 0; i < y.size(); ++i) {
            gx[i] += gy[i] * (1.0 - y[i] * y[i]);
        }
    });
    return out;
}

Var Tape::sigmoid(Var x) {
    const Var out = push(sigmoid_forward(value(x)));
    record([x, out](Tape &t) {
        const auto &y = t.nodes_[out.id].value;
        const auto &gy = t.nodes_[out.id].grad;
        auto &gx = t.g(x);
        for (std::size_t i = 0; i < y.size(); ++i) {
            gx[i] += gy[i] * y[i] * (1.0 - y[i]);
        }
    });
    return out;
}

Var Tape::exp(Var x) {
    const auto xv = value(x);
    std::vector<double> y(xv.size());
    std::transform(xv.begin(), xv.end(), y.begin(), [](double v) { return std::exp(v); });
    const Var out = push(std::move(y));
    record([x, out](Tape &t) {
        const auto &y = t.nodes_[out.id].value;
        const auto &gy = t.nodes_[out.id].grad;
        auto &gx = t.g(x);
        for (std::size_t i = 0; i < y.size(); ++i) {
            gx[i] += gy[i] * y[i];
        }
    });
    return out;
}

Var Tape::softmax(Var x) {
    const Var out = push(diffnet::softmax(value(x)));
    record([x, out](Tape &t) {
        const auto &y = t.nodes_[out.id].value;
        const auto &gy = t.nodes_[out.id].grad;
        double dot = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            dot += gy[i] * y[i];
        }
        auto &gx = t.g(x);
        for (std::size_t i = 0; i < y.size(); ++i) {
            gx[i] += y[i] * (gy[i] - dot);
        }
    });
    return out;
}

Var Tape::log_softmax(Var x) {
    const Var out = push(diffnet::log_softmax(value(x)));
    record([x, out](Tape &t) {
        const auto &y = t.nodes_[out.id].value;
        const auto &gy = t.nodes_[out.id].grad;
        double total = 0.0;
        for (double v : gy) {
            total += v;
        }
        auto &gx = t.g(x);
        for (std::size_t i = 0; i < y.size(); ++i) {
            gx[i] += gy[i] - std::exp(y[i]) * total;
        }
    });
    return out;
}

Var Tape::add(Var a, Var b) {
    check_same_size(a, b, "add");
    const auto av = value(a);
    const auto bv = value(b);
    std::vector<double> y(av.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = av[i] + bv[i];
    }
    const Var out = push(std::move(y));
    record([a, b, out](Tape &t) {
        const auto &gy = t.nodes_[out.id].grad;
        auto &ga = t.g(a);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            ga[i] += gy[i];
        }
        auto &gb = t.g(b);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            gb[i] += gy[i];
        }
    });
    return out;
}

Var Tape::sub(Var a, Var b) {
    check_same_size(a, b, "sub");
    const auto av = value(a);
    const auto bv = value(b);
    std::vector<double> y(av.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = av[i] - bv[i];
    }
    const Var out = push(std::move(y));
    record([a, b, out](Tape &t) {
        const auto &gy = t.nodes_[out.id].grad;
        auto &ga = t.g(a);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            ga[i] += gy[i];
        }
        auto &gb = t.g(b);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            gb[i] -= gy[i];
        }
    });
    return out;
}

Var Tape::mul(Var a, Var b) {
    check_same_size(a, b, "mul");
    const auto av = value(a);
    const auto bv = value(b);
    std::vector<double> y(av.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = av[i] * bv[i];
    }
    const Var out = push(std::move(y));
    record([a, b, out](Tape &t) {
        const auto &gy = t.nodes_[out.id].grad;
        const auto &av = t.nodes_[a.id].value;
        const auto &bv = t.nodes_[b.id].value;
        auto &ga = t.g(a);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            ga[i] += gy[i] * bv[i];
        }
        auto &gb = t.g(b);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            gb[i] += gy[i] * av[i];
        }
    });
    return out;
}

Var Tape::scale(Var a, double k) {
    const auto av = value(a);
    std::vector<double> y(av.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = k * av[i];
    }
    const Var out = push(std::move(y));
    record([a, k, out](Tape &t) {
        const auto &gy = t.nodes_[out.id].grad;
        auto &ga = t.g(a);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            ga[i] += k * gy[i];
        }
    });
    return out;
}

Var Tape::square(Var a) {
    const auto av = value(a);
    std::vector<double> y(av.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = av[i] * av[i];
    }
    const Var out = push(std::move(y));
    record([a, out](Tape &t) {
        const auto &gy = t.nodes_[out.id].grad;
        const auto &av = t.nodes_[a.id].value;
        auto &ga = t.g(a);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            ga[i] += 2.0 * av[i] * gy[i];
        }
    });
    return out;
}

Var Tape::sum(Var a) {
    double total = 0.0;
    for (double v : value(a)) {
        total += v;
    }
    const Var out = push({total});
    record([a, out](Tape &t) {
        const double gy = t.nodes_[out.id].grad[0];
        for (auto &v : t.g(a)) {
            v += gy;
        }
    });
    return out;
}

Var Tape::pick(Var x, std::size_t index) {
    if (index >= value(x).size()) {
        throw UsageError(fmt::format("tape pick: index {} out of range for size {}", index, value(x).size()));
    }
    const Var out = push({value(x)[index]});
    record([x, index, out](Tape &t) { t.g(x)[index] += t.nodes_[out.id].grad[0]; });
    return out;
}

void Tape::backward(Var loss, double loss_grad) {
    if (ops_.empty()) {
        throw UsageError("backward called before any forward op was recorded");
    }
    if (loss.id >= nodes_.size() || nodes_[loss.id].value.size() != 1) {
        throw UsageError("backward requires a scalar loss node");
    }
    for (auto &node : nodes_) {
        std::fill(node.grad.begin(), node.grad.end(), 0.0);
    }
    nodes_[loss.id].grad[0] = loss_grad;
    trace_.clear();
    trace_.reserve(ops_.size());
    for (std::size_t k = ops_.size(); k-- > 0;) {
        trace_.push_back(k);
        ops_[k](*this);
    }
}

void Tape::clear() {
    nodes_.clear();
    ops_.clear();
    trace_.clear();
}

} // namespace qtrader::diffnet
