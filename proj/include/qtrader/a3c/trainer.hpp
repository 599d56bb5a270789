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
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "qtrader/a3c/net.hpp"
#include "qtrader/diffnet/optimizer.hpp"
#include "qtrader/tradeenv/env.hpp"

namespace qtrader::a3c {

struct TrainConfig {
    double gamma = 0.9;
    std::size_t update_every = 10; // K
    std::size_t max_episodes = 3000;
    /// 0 selects the machine's core count (at least 2).
    std::size_t n_workers = 0;
    double learning_rate = 1e-3;
    diffnet::OptimizerKind optimizer = diffnet::OptimizerKind::adam;
    std::uint64_t seed = 1;
    HeadKind head = HeadKind::classical;
    double entropy_coeff = 0.0;
    /// Global-norm gradient clip applied before each push; 0 disables.
    double clip_norm = 40.0;
    /// Rewards are multiplied by this factor inside the loss only; histories stay in index points.
    double reward_scale = 1.0;
    unsigned latent = 8;
    unsigned depth = 2;
    std::size_t moving_average_window = 100;

    /// Throws ConfigError for gamma outside (0, 1), K == 0 and similar.
    void validate() const;
    [[nodiscard]] std::size_t resolved_workers() const;
};

struct Trajectory {
    std::vector<tradeenv::Observation> states;
    std::vector<std::size_t> actions;
    std::vector<double> rewards;
    /// V(s_{t+K}) for a truncated segment, 0 after a terminal step.
    double bootstrap = 0.0;

    [[nodiscard]] std::size_t size() const { return actions.size(); }
    void clear();
};

struct LossAndGrads {
    double loss = 0.0;
    std::vector<double> grads; // flat, in ActorCriticNet::parameters() order
};

/// Sum over the trajectory of
///   0.5 (R_t - V(s_t))^2 - log pi(a_t | s_t) * A_t - entropy_coeff * H(pi(. | s_t))
/// with A_t = R_t - V(s_t) held constant in the policy term.
/// Throws UsageError when returns and trajectory lengths differ.
LossAndGrads compute_loss_and_grads(ActorCriticNet &net, const Trajectory &trajectory,
                                    std::span<const double> returns, double entropy_coeff = 0.0);

/// Shared parameter server: flat theta, shared optimizer, episode bookkeeping.
class GlobalParams {
  public:
    GlobalParams(std::vector<double> theta, diffnet::OptimizerConfig optimizer, std::size_t max_episodes);

    /// Applies one optimizer step and returns the post-update theta as a single transaction.
    /// Throws TrainingError (leaving theta untouched) on non-finite or mis-sized gradients.
    std::vector<double> push_pull(std::span<const double> grads);
    [[nodiscard]] std::vector<double> snapshot() const;

    /// Reserves the next episode slot; nullopt once max_episodes have been handed out.
    std::optional<std::size_t> claim_episode();
    void record_episode(double reward);

    [[nodiscard]] std::size_t episodes_recorded() const;
    [[nodiscard]] std::vector<double> reward_history() const;
    [[nodiscard]] std::size_t updates() const;
    [[nodiscard]] std::size_t rejected_updates() const;

  private:
    mutable std::mutex mutex_;
    std::vector<double> theta_;
    diffnet::Optimizer optimizer_;
    std::size_t max_episodes_;
    std::size_t claimed_ = 0;
    std::vector<double> rewards_;
    std::size_t updates_ = 0;
    std::size_t rejected_ = 0;
};

/// Pushes grads and returns the pulled parameters.
inline std::vector<double> global_update(GlobalParams &global, std::span<const double> grads) {
    return global.push_pull(grads);
}

struct TrainingHistory {
    std::vector<double> rewards;
    std::vector<double> moving_average;
};

/// Trailing mean over at most `window` episodes.
std::vector<double> moving_average(std::span<const double> values, std::size_t window);

struct TrainingResult {
    TrainingHistory history;
    std::vector<double> parameters; // final global theta
    std::size_t updates = 0;
    std::size_t rejected_updates = 0;
};

using EnvFactory = std::function<tradeenv::TradingEnv(std::size_t worker)>;
using NetFactory = std::function<ActorCriticNet()>;

/// Runs N asynchronous workers until MAX_EP episodes have completed. With one worker the run is
/// executed on the calling thread and is bit-reproducible for a fixed seed.
/// Throws TrainingError when a worker fails.
TrainingResult train(const TrainConfig &config, const EnvFactory &make_env, const NetFactory &make_net);

void write_history_csv(std::ostream &out, const TrainingHistory &history, std::string_view stamp = {});

} // namespace qtrader::a3c
