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

#include "qtrader/a3c/net.hpp"

#include <fmt/format.h>

#include "qtrader/common/error.hpp"

namespace qtrader::a3c {

HeadKind parse_head_kind(std::string_view name) {
    if (name == "classical") {
        return HeadKind::classical;
    }
    if (name == "quantum") {
        return HeadKind::quantum;
    }
    throw ConfigError(fmt::format("unknown head kind '{}'", name));
}

std::string_view to_string(HeadKind kind) { return kind == HeadKind::classical ? "classical" : "quantum"; }

namespace {

Encoder make_encoder(const NetConfig &config, const std::string &name) {
    if (config.head == HeadKind::quantum) {
        return diffnet::VqcLayer(config.latent, config.depth, name);
    }
    return diffnet::DenseLayer(config.latent, config.latent, name);
}

diffnet::Parameter &encoder_param(Encoder &enc, std::size_t k) {
    return std::visit(
        [k](auto &layer) -> diffnet::Parameter & {
            using T = std::decay_t<decltype(layer)>;
            if constexpr (std::is_same_v<T, diffnet::DenseLayer>) {
                return k == 0 ? layer.weight : layer.bias;
            } else {
                return layer.angles;
            }
        },
        enc);
}

std::size_t encoder_param_count(const Encoder &enc) {
    return std::holds_alternative<diffnet::DenseLayer>(enc) ? 2 : 1;
}

std::vector<double> encode(const Encoder &enc, std::span<const double> z) {
    return std::visit([z](const auto &layer) { return layer.forward(z); }, enc);
}

diffnet::Var record_encoder(diffnet::Tape &tape, Encoder &enc, diffnet::Var z) {
    return std::visit(
        [&tape, z](auto &layer) {
            using T = std::decay_t<decltype(layer)>;
            if constexpr (std::is_same_v<T, diffnet::DenseLayer>) {
                return tape.dense(layer, z);
            } else {
                return tape.vqc(layer, z);
            }
        },
        enc);
}

} // namespace

ActorCriticNet::ActorCriticNet(const NetConfig &config)
    : policy_in(config.observation_size, config.latent, "policy.in"),
      policy_encoder(make_encoder(config, "policy.encoder")),
      policy_out(config.latent, config.action_count, "policy.out"),
      value_in(config.observation_size, config.latent, "value.in"),
      value_encoder(make_encoder(config, "value.encoder")), value_out(config.latent, 1, "value.out"),
      config_(config) {
    if (config.observation_size == 0 || config.latent == 0 || config.action_count == 0) {
        throw ConfigError("actor-critic net needs positive observation, latent and action sizes");
    }
    if (config.head == HeadKind::quantum) {
        qsim::VqcParams{config.latent, config.depth}.validate();
    }
}

void ActorCriticNet::init(std::mt19937_64 &rng) {
    auto init_encoder = [&rng](Encoder &enc) { std::visit([&rng](auto &layer) { layer.init(rng); }, enc); };
    policy_in.init(rng);
    init_encoder(policy_encoder);
    policy_out.init(rng);
    value_in.init(rng);
    init_encoder(value_encoder);
    value_out.init(rng);
}

void ActorCriticNet::check_observation(std::span<const double> observation) const {
    if (observation.size() != config_.observation_size) {
        throw UsageError(fmt::format("observation has {} entries, network expects {}", observation.size(),
                                     config_.observation_size));
    }
}

std::vector<double> ActorCriticNet::policy(std::span<const double> observation) const {
    check_observation(observation);
    const auto z = diffnet::tanh_forward(policy_in.forward(observation));
    const auto q = diffnet::tanh_forward(encode(policy_encoder, z));
    return diffnet::softmax(policy_out.forward(q));
}

double ActorCriticNet::value(std::span<const double> observation) const {
    check_observation(observation);
    const auto z = diffnet::tanh_forward(value_in.forward(observation));
    const auto q = diffnet::tanh_forward(encode(value_encoder, z));
    return value_out.forward(q)[0];
}

ActorCriticNet::Recorded ActorCriticNet::record(diffnet::Tape &tape, std::span<const double> observation) {
    check_observation(observation);
    const auto s = tape.input(observation);
    const auto zp = tape.tanh(tape.dense(policy_in, s));
    const auto qp = tape.tanh(record_encoder(tape, policy_encoder, zp));
    const auto log_probs = tape.log_softmax(tape.dense(policy_out, qp));
    const auto zv = tape.tanh(tape.dense(value_in, s));
    const auto qv = tape.tanh(record_encoder(tape, value_encoder, zv));
    const auto value = tape.pick(tape.dense(value_out, qv), 0);
    return {log_probs, value};
}

diffnet::ParameterList ActorCriticNet::parameters() {
    diffnet::ParameterList list{&policy_in.weight, &policy_in.bias};
    for (std::size_t k = 0; k < encoder_param_count(policy_encoder); ++k) {
        list.push_back(&encoder_param(policy_encoder, k));
    }
    list.insert(list.end(), {&policy_out.weight, &policy_out.bias, &value_in.weight, &value_in.bias});
    for (std::size_t k = 0; k < encoder_param_count(value_encoder); ++k) {
        list.push_back(&encoder_param(value_encoder, k));
    }
    list.insert(list.end(), {&value_out.weight, &value_out.bias});
    return list;
}

diffnet::ConstParameterList ActorCriticNet::parameters() const {
    return diffnet::as_const(const_cast<ActorCriticNet *>(this)->parameters());
}

std::size_t ActorCriticNet::parameter_count() const { return diffnet::total_size(parameters()); }

std::vector<double> ActorCriticNet::flat_parameters() const { return diffnet::flatten_values(parameters()); }

void ActorCriticNet::set_flat_parameters(std::span<const double> theta) { diffnet::assign_values(parameters(), theta); }

std::size_t greedy_action(std::span<const double> probs) {
    if (probs.empty()) {
        throw UsageError("greedy action over an empty distribution");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[best]) {
            best = i;
        }
    }
    return best;
}

} // namespace qtrader::a3c
