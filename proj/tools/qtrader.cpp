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

// qtrader command-line driver.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 stage failure.
// QTRADER_LOG selects the log level (trace, debug, info, warn, error, off; default info).

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "qtrader/app/config.hpp"
#include "qtrader/app/experiment.hpp"
#include "qtrader/app/synthetic.hpp"

namespace {

using namespace qtrader;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitStage = 2;

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> strategy;
    bool use_forecast = false;
    std::optional<std::size_t> workers;
};

void add_common(CLI::App &cmd, Overrides &o, bool with_strategy) {
    cmd.add_option("-c,--config", o.config, "experiment config (INI)")->required()->check(CLI::ExistingFile);
    cmd.add_option("--seed", o.seed, "override [experiment] seed");
    cmd.add_option("-o,--out", o.out, "override the output directory");
    cmd.add_option("--workers", o.workers, "override [train] workers (0 = core count)");
    cmd.add_flag("--use-forecast", o.use_forecast, "attach LSTM forecasts to the state");
    if (with_strategy) {
        cmd.add_option("--strategy", o.strategy, "classical | quantum | random");
    }
}

app::ExperimentConfig resolve(const Overrides &o) {
    auto config = app::load_config(o.config);
    if (o.seed) {
        config.seed = *o.seed;
    }
    if (o.out) {
        config.output_dir = *o.out;
    }
    if (o.workers) {
        config.train.n_workers = *o.workers;
    }
    if (o.use_forecast) {
        config.use_forecast = true;
    }
    if (o.strategy) {
        config.strategy = app::parse_strategy(*o.strategy);
    }
    config.validate();
    return config;
}

void print_artifacts(const app::RunArtifacts &a) {
    for (const auto &f : a.files) {
        std::cout << f.string() << '\n';
    }
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("qtrader");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");
    spdlog::set_level(spdlog::level::info);
    if (const char *level = std::getenv("QTRADER_LOG")) {
        spdlog::cfg::helpers::load_levels(level);
    }
}

} // namespace

int main(int argc, char **argv) {
    setup_logging();

    CLI::App cli{"Hybrid quantum-classical A3C trading experiments"};
    cli.require_subcommand(1);

    app::SyntheticSpec gen;
    std::string gen_out;
    auto *generate = cli.add_subcommand("generate", "write a synthetic market CSV");
    generate->add_option("--kind", gen.kind, "sawtooth | trend | white-noise | ar1 | sine")->capture_default_str();
    generate->add_option("--length", gen.length, "rows")->capture_default_str();
    generate->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
    generate->add_option("--period", gen.period, "sawtooth / sine period in rows")->capture_default_str();
    generate->add_option("--amplitude", gen.amplitude, "sawtooth swing / sine peak return")->capture_default_str();
    generate->add_option("--ramp", gen.ramp, "sawtooth ramp: down | up")->capture_default_str();
    generate->add_option("--phi", gen.phi, "ar1 coefficient")->capture_default_str();
    generate->add_option("--drift", gen.drift, "weekly drift")->capture_default_str();
    generate->add_option("--volatility", gen.volatility, "weekly return deviation")->capture_default_str();
    generate->add_option("-o,--out", gen_out, "output CSV")->required();

    Overrides forecast_o;
    Overrides train_o;
    Overrides evaluate_o;
    Overrides matrix_o;
    auto *forecast = cli.add_subcommand("forecast", "train the LSTM forecaster and export the forecast column");
    add_common(*forecast, forecast_o, false);
    auto *train = cli.add_subcommand("train", "run one experiment: train, evaluate, report");
    add_common(*train, train_o, true);
    auto *evaluate = cli.add_subcommand("evaluate", "re-evaluate the checkpoint in the output directory");
    add_common(*evaluate, evaluate_o, true);

    std::string report_dir;
    double report_cash = 10000.0;
    auto *report = cli.add_subcommand("report", "recompute metrics and plots from a run directory");
    report->add_option("-o,--out", report_dir, "run directory")->required()->check(CLI::ExistingDirectory);
    report->add_option("--initial-cash", report_cash, "initial cash of the run")->capture_default_str();

    std::vector<std::string> matrix_strategies;
    auto *matrix = cli.add_subcommand("matrix", "run the five-strategy comparison");
    add_common(*matrix, matrix_o, false);
    matrix->add_option("--strategy", matrix_strategies,
                       "classical | classical+lstm | quantum | quantum+lstm | random (repeatable; default all)");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = cli.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*generate) {
            app::write_synthetic_csv(gen, gen_out);
            std::cout << gen_out << '\n';
        } else if (*forecast) {
            const auto a = app::run_forecast(resolve(forecast_o));
            if (a.forecast_evaluation) {
                std::cout << "rmse " << a.forecast_evaluation->rmse << " pearson " << a.forecast_evaluation->pearson
                          << " directional_accuracy " << a.forecast_evaluation->directional_accuracy << '\n';
            }
            print_artifacts(a);
        } else if (*train) {
            print_artifacts(app::run_experiment(resolve(train_o)));
        } else if (*evaluate) {
            print_artifacts(app::evaluate_checkpoint(resolve(evaluate_o)));
        } else if (*report) {
            print_artifacts(app::regenerate_report(report_dir, report_cash));
        } else if (*matrix) {
            const auto config = resolve(matrix_o);
            std::vector<app::StrategySpec> specs;
            for (const auto &s : matrix_strategies) {
                specs.push_back(app::parse_strategy_spec(s));
            }
            if (specs.empty()) {
                specs = app::default_strategies();
            }
            const auto result = app::run_matrix(config, specs);
            for (const auto &f : result.files) {
                std::cout << f.string() << '\n';
            }
            for (const auto &c : result.columns) {
                if (!c.report) {
                    return kExitStage;
                }
            }
        }
    } catch (const ConfigError &e) {
        spdlog::error("{}", e.what());
        return kExitConfig;
    } catch (const UsageError &e) {
        spdlog::error("{}", e.what());
        return kExitConfig;
    } catch (const std::exception &e) {
        spdlog::error("{}", e.what());
        return kExitStage;
    }
    return kExitOk;
}
