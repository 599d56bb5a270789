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

#include "qtrader/app/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "qtrader/common/csv.hpp"
#include "qtrader/common/date.hpp"
#include "qtrader/common/error.hpp"

namespace qtrader::app {

namespace pt = boost::property_tree;

Strategy parse_strategy(std::string_view name) {
    if (name == "classical") {
        return Strategy::classical;
    }
    if (name == "quantum") {
        return Strategy::quantum;
    }
    if (name == "random") {
        return Strategy::random;
    }
    throw ConfigError(fmt::format("unknown strategy '{}' (expected classical, quantum or random)", name));
}

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
    case Strategy::classical:
        return "classical";
    case Strategy::quantum:
        return "quantum";
    case Strategy::random:
        return "random";
    }
    return "?";
}

void SyntheticSpec::validate() const {
    static const std::set<std::string> kinds{"sawtooth", "trend", "white-noise", "ar1", "sine"};
    if (!kinds.contains(kind)) {
        throw ConfigError(fmt::format("unknown synthetic kind '{}'", kind));
    }
    if (length < 10) {
        throw ConfigError(fmt::format("synthetic length must be at least 10, got {}", length));
    }
    if (period < 2) {
        throw ConfigError("synthetic period must be at least 2");
    }
    if (ramp != "up" && ramp != "down") {
        throw ConfigError(fmt::format("sawtooth ramp must be 'up' or 'down', got '{}'", ramp));
    }
    if (!(amplitude >= 0.0 && amplitude < 1.0) || !(volatility >= 0.0) || !(base > 0.0)) {
        throw ConfigError("synthetic amplitude must lie in [0, 1), volatility >= 0 and base > 0");
    }
    if (!(phi > -1.0 && phi < 1.0)) {
        throw ConfigError(fmt::format("ar1 phi must lie in (-1, 1), got {}", phi));
    }
    try {
        (void)Date::parse(start);
    } catch (const Error &e) {
        throw ConfigError(fmt::format("synthetic start date: {}", e.what()));
    }
}

void ExperimentConfig::validate() const {
    if (data_path.has_value() == synthetic.has_value()) {
        throw ConfigError("exactly one data source is required: [data] path or [data] synthetic");
    }
    if (data_path && !std::filesystem::exists(*data_path)) {
        throw ConfigError(fmt::format("data file '{}' does not exist", data_path->string()));
    }
    if (synthetic) {
        synthetic->validate();
    }
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
        throw ConfigError(fmt::format("train_fraction must lie in (0, 1], got {}", train_fraction));
    }
    if (output_dir.empty()) {
        throw ConfigError("output directory must not be empty");
    }
    train.validate();
    env.validate();
    if (forecaster.lookback == 0 || forecaster.hidden == 0 || forecaster.epochs == 0 || forecaster.batch_size == 0 ||
        !(forecaster.learning_rate > 0.0)) {
        throw ConfigError("forecaster lookback, hidden, epochs, batch_size and learning_rate must be positive");
    }
}

a3c::TrainConfig ExperimentConfig::resolved_train() const {
    auto t = train;
    t.seed = seed;
    return t;
}

forecaster::ForecasterConfig ExperimentConfig::resolved_forecaster() const {
    auto f = forecaster;
    f.seed = seed;
    return f;
}

namespace {

const std::map<std::string, std::set<std::string>> &known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"data",
         {"path", "train_fraction", "synthetic", "length", "synthetic_seed", "period", "amplitude", "ramp", "phi",
          "drift", "volatility", "base", "start"}},
        {"experiment", {"strategy", "use_forecast", "forecast_mode", "seed", "output"}},
        {"train",
         {"gamma", "update_every", "max_episodes", "workers", "learning_rate", "optimizer", "entropy_coeff",
          "clip_norm", "reward_scale", "latent", "depth", "moving_average_window"}},
        {"env", {"trade_cost_rate", "initial_cash", "include_position"}},
        {"forecaster", {"lookback", "hidden", "epochs", "batch_size", "learning_rate"}},
    };
    return keys;
}

template <typename T> void read(const pt::ptree &tree, const std::string &key, T &target) {
    const auto node = tree.get_optional<std::string>(key);
    if (!node) {
        return;
    }
    const auto value = tree.get_optional<T>(key);
    if (!value) {
        throw ConfigError(fmt::format("config key '{}' has an invalid value '{}'", key, *node));
    }
    target = *value;
}

bool parse_bool(const std::string &key, const std::string &text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw ConfigError(fmt::format("config key '{}' expects a boolean, got '{}'", key, text));
}

void read_bool(const pt::ptree &tree, const std::string &key, bool &target) {
    if (const auto node = tree.get_optional<std::string>(key)) {
        target = parse_bool(key, *node);
    }
}

} // namespace

ExperimentConfig parse_config(std::istream &in, const std::filesystem::path &base_dir) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError(fmt::format("config parse error at line {}: {}", e.line(), e.message()));
    }
    for (const auto &[section, body] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) {
            throw ConfigError(fmt::format("unknown config section [{}]", section));
        }
        for (const auto &[key, value] : body) {
            if (!it->second.contains(key)) {
                throw ConfigError(fmt::format("unknown config key '{}' in [{}]", key, section));
            }
        }
    }

    ExperimentConfig c;
    if (const auto path = tree.get_optional<std::string>("data.path")) {
        std::filesystem::path p = *path;
        c.data_path = std::filesystem::absolute(p.is_relative() && !base_dir.empty() ? base_dir / p : p);
    }
    read(tree, "data.train_fraction", c.train_fraction);
    if (const auto kind = tree.get_optional<std::string>("data.synthetic")) {
        SyntheticSpec s;
        s.kind = *kind;
        read(tree, "data.length", s.length);
        read(tree, "data.synthetic_seed", s.seed);
        read(tree, "data.period", s.period);
        read(tree, "data.amplitude", s.amplitude);
        read(tree, "data.ramp", s.ramp);
        read(tree, "data.phi", s.phi);
        read(tree, "data.drift", s.drift);
        read(tree, "data.volatility", s.volatility);
        read(tree, "data.base", s.base);
        read(tree, "data.start", s.start);
        c.synthetic = s;
    }

    if (const auto s = tree.get_optional<std::string>("experiment.strategy")) {
        c.strategy = parse_strategy(*s);
    }
    read_bool(tree, "experiment.use_forecast", c.use_forecast);
    if (const auto m = tree.get_optional<std::string>("experiment.forecast_mode")) {
        if (*m == "value") {
            c.forecast_mode = ForecastMode::value;
        } else if (*m == "direction") {
            c.forecast_mode = ForecastMode::direction;
        } else {
            throw ConfigError(fmt::format("forecast_mode must be 'value' or 'direction', got '{}'", *m));
        }
    }
    read(tree, "experiment.seed", c.seed);
    if (const auto out = tree.get_optional<std::string>("experiment.output")) {
        c.output_dir = *out;
    }

    auto &t = c.train;
    read(tree, "train.gamma", t.gamma);
    read(tree, "train.update_every", t.update_every);
    read(tree, "train.max_episodes", t.max_episodes);
    read(tree, "train.workers", t.n_workers);
    read(tree, "train.learning_rate", t.learning_rate);
    if (const auto o = tree.get_optional<std::string>("train.optimizer")) {
        try {
            t.optimizer = diffnet::parse_optimizer_kind(*o);
        } catch (const Error &e) {
            throw ConfigError(e.what());
        }
    }
    read(tree, "train.entropy_coeff", t.entropy_coeff);
    read(tree, "train.clip_norm", t.clip_norm);
    read(tree, "train.reward_scale", t.reward_scale);
    read(tree, "train.latent", t.latent);
    read(tree, "train.depth", t.depth);
    read(tree, "train.moving_average_window", t.moving_average_window);

    read(tree, "env.trade_cost_rate", c.env.trade_cost_rate);
    read(tree, "env.initial_cash", c.env.initial_cash);
    read_bool(tree, "env.include_position", c.env.include_position_in_state);

    read(tree, "forecaster.lookback", c.forecaster.lookback);
    read(tree, "forecaster.hidden", c.forecaster.hidden);
    read(tree, "forecaster.epochs", c.forecaster.epochs);
    read(tree, "forecaster.batch_size", c.forecaster.batch_size);
    read(tree, "forecaster.learning_rate", c.forecaster.learning_rate);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
    }
    return parse_config(in, path.parent_path());
}

void write_config(std::ostream &out, const ExperimentConfig &c, bool include_output) {
    const auto num = [](double v) { return format_number(v); };
    out << "[data]\n";
    if (c.data_path) {
        out << "path = " << c.data_path->string() << '\n';
    }
    out << "train_fraction = " << num(c.train_fraction) << '\n';
    if (c.synthetic) {
        const auto &s = *c.synthetic;
        out << "synthetic = " << s.kind << '\n'
            << "length = " << s.length << '\n'
            << "synthetic_seed = " << s.seed << '\n'
            << "period = " << s.period << '\n'
            << "amplitude = " << num(s.amplitude) << '\n'
            << "ramp = " << s.ramp << '\n'
            << "phi = " << num(s.phi) << '\n'
            << "drift = " << num(s.drift) << '\n'
            << "volatility = " << num(s.volatility) << '\n'
            << "base = " << num(s.base) << '\n'
            << "start = " << s.start << '\n';
    }
    out << "\n[experiment]\n"
        << "strategy = " << to_string(c.strategy) << '\n'
        << "use_forecast = " << (c.use_forecast ? "true" : "false") << '\n'
        << "forecast_mode = " << (c.forecast_mode == ForecastMode::value ? "value" : "direction") << '\n'
        << "seed = " << c.seed << '\n';
    if (include_output) {
        out << "output = " << c.output_dir.string() << '\n';
    }
    const auto &t = c.train;
    out << "\n[train]\n"
        << "gamma = " << num(t.gamma) << '\n'
        << "update_every = " << t.update_every << '\n'
        << "max_episodes = " << t.max_episodes << '\n'
        << "workers = " << t.n_workers << '\n'
        << "learning_rate = " << num(t.learning_rate) << '\n'
        << "optimizer = " << diffnet::to_string(t.optimizer) << '\n'
        << "entropy_coeff = " << num(t.entropy_coeff) << '\n'
        << "clip_norm = " << num(t.clip_norm) << '\n'
        << "reward_scale = " << num(t.reward_scale) << '\n'
        << "latent = " << t.latent << '\n'
        << "depth = " << t.depth << '\n'
        << "moving_average_window = " << t.moving_average_window << '\n';
    out << "\n[env]\n"
        << "trade_cost_rate = " << num(c.env.trade_cost_rate) << '\n'
        << "initial_cash = " << num(c.env.initial_cash) << '\n'
        << "include_position = " << (c.env.include_position_in_state ? "true" : "false") << '\n';
    const auto &f = c.forecaster;
    out << "\n[forecaster]\n"
        << "lookback = " << f.lookback << '\n'
        << "hidden = " << f.hidden << '\n'
        << "epochs = " << f.epochs << '\n'
        << "batch_size = " << f.batch_size << '\n'
        << "learning_rate = " << num(f.learning_rate) << '\n';
}

std::string config_hash(const ExperimentConfig &config) {
    std::ostringstream text;
    write_config(text, config, false);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text.str()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

std::string artifact_stamp(const ExperimentConfig &config) {
    return fmt::format("config_hash={} seed={}", config_hash(config), config.seed);
}

} // namespace qtrader::app
