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

#include "qtrader/a3c/trainer.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "qtrader/a3c/returns.hpp"
#include "qtrader/common/csv.hpp"
#include "qtrader/common/error.hpp"

namespace qtrader::a3c {

void TrainConfig::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw ConfigError(fmt::format("gamma must lie in (0, 1), got {}", gamma));
    }
    if (update_every == 0) {
        throw ConfigError("update_every (K) must be at least 1");
    }
    if (!(learning_rate > 0.0)) {
        throw ConfigError(fmt::format("learning rate must be positive, got {}", learning_rate));
    }
    if (entropy_coeff < 0.0 || clip_norm < 0.0 || !(reward_scale > 0.0)) {
        throw ConfigError("entropy_coeff and clip_norm must be non-negative and reward_scale positive");
    }
    if (latent == 0 || moving_average_window == 0) {
        throw ConfigError("latent width and moving-average window must be positive");
    }
}

std::size_t TrainConfig::resolved_workers() const {
    if (n_workers > 0) {
        return n_workers;
    }
    return std::max<std::size_t>(2, std::thread::hardware_concurrency());
}

void Trajectory::clear() {
    states.clear();
    actions.clear();
    rewards.clear();
    bootstrap = 0.0;
}

LossAndGrads compute_loss_and_grads(ActorCriticNet &net, const Trajectory &trajectory,
                                    std::span<const double> returns, double entropy_coeff) {
    if (returns.size() != trajectory.size() || trajectory.states.size() != trajectory.size() || trajectory.size() == 0) {
        throw UsageError(fmt::format("loss needs matching non-empty trajectory ({}) and returns ({})",
                                     trajectory.size(), returns.size()));
    }
    auto params = net.parameters();
    diffnet::zero_grads(params);
    diffnet::Tape tape;
    std::optional<diffnet::Var> total;
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        const auto rec = net.record(tape, trajectory.states[t]);
        const double advantage = returns[t] - tape.scalar(rec.value);
        const auto value_term = tape.scale(tape.square(tape.sub(tape.constant(returns[t]), rec.value)), 0.5);
        const auto policy_term = tape.scale(tape.pick(rec.log_probs, trajectory.actions[t]), -advantage);
        auto term = tape.add(value_term, policy_term);
        if (entropy_coeff > 0.0) {
            // -beta * H = beta * sum(p log p)
            const auto plogp = tape.sum(tape.mul(tape.exp(rec.log_probs), rec.log_probs));
            term = tape.add(term, tape.scale(plogp, entropy_coeff));
        }
        total = total ? tape.add(*total, term) : term;
    }
    tape.backward(*total);
    return {tape.scalar(*total), diffnet::flatten_grads(diffnet::as_const(params))};
}

GlobalParams::GlobalParams(std::vector<double> theta, diffnet::OptimizerConfig optimizer, std::size_t max_episodes)
    : theta_(std::move(theta)), optimizer_(optimizer, theta_.size()), max_episodes_(max_episodes) {}

std::vector<double> GlobalParams::push_pull(std::span<const double> grads) {
    std::lock_guard lock(mutex_);
    if (grads.size() != theta_.size()) {
        ++rejected_;
        throw TrainingError(fmt::format("gradient has {} entries, parameters {}", grads.size(), theta_.size()));
    }
    for (double g : grads) {
        if (!std::isfinite(g)) {
            ++rejected_;
            throw TrainingError("non-finite gradient rejected by the global network");
        }
    }
    optimizer_.step(theta_, grads);
    ++updates_;
    return theta_;
}

std::vector<double> GlobalParams::snapshot() const {
    std::lock_guard lock(mutex_);
    return theta_;
}

std::optional<std::size_t> GlobalParams::claim_episode() {
    std::lock_guard lock(mutex_);
    if (claimed_ >= max_episodes_) {
        return std::nullopt;
    }
    return claimed_++;
}

void GlobalParams::record_episode(double reward) {
    std::lock_guard lock(mutex_);
    rewards_.push_back(reward);
}

std::size_t GlobalParams::episodes_recorded() const {
    std::lock_guard lock(mutex_);
    return rewards_.size();
}

std::vector<double> GlobalParams::reward_history() const {
    std::lock_guard lock(mutex_);
    return rewards_;
}

std::size_t GlobalParams::updates() const {
    std::lock_guard lock(mutex_);
    return updates_;
}

std::size_t GlobalParams::rejected_updates() const {
    std::lock_guard lock(mutex_);
    return rejected_;
}

std::vector<double> moving_average(std::span<const double> values, std::size_t window) {
    std::vector<double> out(values.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum += values[i];
        if (i >= window) {
            sum -= values[i - window];
        }
        out[i] = sum / static_cast<double>(std::min(i + 1, window));
    }
    return out;
}

namespace {

void run_worker(std::size_t id, const TrainConfig &config, GlobalParams &global, const EnvFactory &make_env,
                const NetFactory &make_net, const std::atomic<bool> &abort) {
    tradeenv::TradingEnv env = make_env(id);
    ActorCriticNet net = make_net();
    net.set_flat_parameters(global.snapshot());
    std::seed_seq seq{config.seed, static_cast<std::uint64_t>(id) + 1};
    std::mt19937_64 rng(seq);

    Trajectory traj;
    while (!abort.load(std::memory_order_relaxed)) {
        if (!global.claim_episode()) {
            break;
        }
        auto obs = env.reset();
        double episode_reward = 0.0;
        while (true) {
            const auto probs = net.policy(obs);
            const std::size_t action = diffnet::categorical_sample(probs, rng);
            auto result = env.step(tradeenv::action_from_index(action));
            episode_reward += result.reward;
            traj.states.push_back(std::move(obs));
            traj.actions.push_back(action);
            traj.rewards.push_back(result.reward * config.reward_scale);
            obs = std::move(result.observation);

            if (traj.size() == config.update_every || result.done) {
                traj.bootstrap = result.done ? 0.0 : net.value(obs);
                const auto returns = n_step_returns(traj.rewards, traj.bootstrap, config.gamma);
                auto lg = compute_loss_and_grads(net, traj, returns, config.entropy_coeff);
                if (config.clip_norm > 0.0) {
                    diffnet::clip_global_norm(lg.grads, config.clip_norm);
                }
                std::vector<double> theta;
                try {
                    theta = global_update(global, lg.grads);
                } catch (const TrainingError &) {
                    theta = global.snapshot(); // rejected; resync and continue
                }
                net.set_flat_parameters(theta);
                traj.clear();
            }
            if (result.done) {
                break;
            }
        }
        global.record_episode(episode_reward);
    }
}

} // namespace

TrainingResult train(const TrainConfig &config, const EnvFactory &make_env, const NetFactory &make_net) {
    config.validate();
    ActorCriticNet proto = make_net();
    std::mt19937_64 init_rng(config.seed);
    proto.init(init_rng);
    GlobalParams global(proto.flat_parameters(), {config.optimizer, config.learning_rate}, config.max_episodes);

    const std::size_t workers = config.resolved_workers();
    std::atomic<bool> abort{false};
    if (workers == 1) {
        try {
            run_worker(0, config, global, make_env, make_net, abort);
        } catch (const Error &e) {
            throw TrainingError(fmt::format("worker 0 failed: {}", e.what()));
        }
    } else {
        std::vector<std::exception_ptr> failures(workers);
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (std::size_t id = 0; id < workers; ++id) {
            threads.emplace_back([&, id] {
                try {
                    run_worker(id, config, global, make_env, make_net, abort);
                } catch (...) {
                    failures[id] = std::current_exception();
                    abort.store(true);
                }
            });
        }
        for (auto &t : threads) {
            t.join();
        }
        for (std::size_t id = 0; id < workers; ++id) {
            if (failures[id]) {
                try {
                    std::rethrow_exception(failures[id]);
                } catch (const std::exception &e) {
                    throw TrainingError(fmt::format("worker {} failed: {}", id, e.what()));
                }
            }
        }
    }

    TrainingResult result;
    result.history.rewards = global.reward_history();
    result.history.moving_average = moving_average(result.history.rewards, config.moving_average_window);
    result.parameters = global.snapshot();
    result.updates = global.updates();
    result.rejected_updates = global.rejected_updates();
    return result;
}

void write_history_csv(std::ostream &out, const TrainingHistory &history, std::string_view stamp) {
    if (!stamp.empty()) {
        out << "# " << stamp << '\n';
    }
    out << "episode,reward,moving_average\n";
    for (std::size_t i = 0; i < history.rewards.size(); ++i) {
        out << (i + 1) << ',' << format_number(history.rewards[i]) << ',' << format_number(history.moving_average[i])
            << '\n';
    }
}

} // namespace qtrader::a3c
