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

#include "qtrader/app/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "qtrader/common/csv.hpp"
#include "qtrader/common/error.hpp"

namespace qtrader::app {

namespace {

constexpr double kWidth = 900;
constexpr double kHeight = 420;
constexpr double kLeft = 80;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

/// A single-panel chart: data coordinates mapped into a fixed plot area.
class Chart {
  public:
    Chart(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

    void fit(std::span<const double> ys, double x_max) {
        for (double y : ys) {
            ymin_ = std::min(ymin_, y);
            ymax_ = std::max(ymax_, y);
        }
        xmax_ = std::max(xmax_, x_max);
    }

    [[nodiscard]] double px(double x) const {
        const double span = xmax_ > 0 ? xmax_ : 1.0;
        return kLeft + x / span * (kWidth - kLeft - kRight);
    }
    [[nodiscard]] double py(double y) const {
        double lo = ymin_;
        double hi = ymax_;
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
        }
        return kTop + (hi - y) / (hi - lo) * (kHeight - kTop - kBottom);
    }

    void begin(std::ostream &out, std::string_view stamp) const {
        out << R"svg(<?xml version="1.0" encoding="UTF-8"?>)svg" << '\n';
        out << fmt::format(R"svg(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)svg",
                           kWidth, kHeight, kWidth, kHeight)
            << '\n';
        if (!stamp.empty()) {
            out << "<!-- " << escape(stamp) << " -->\n";
        }
        out << R"svg(<rect width="100%" height="100%" fill="white"/>)svg" << '\n';
        out << fmt::format(R"svg(<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>)svg",
                           kWidth / 2, escape(title_))
            << '\n';
        axes(out);
    }

    static void end(std::ostream &out) { out << "</svg>\n"; }

    void polyline(std::ostream &out, std::span<const double> ys, std::string_view color, std::string_view cls,
                  double width = 1.5) const {
        out << fmt::format(R"svg(<polyline class="{}" fill="none" stroke="{}" stroke-width="{}" points=")svg", cls, color, width);
        for (std::size_t i = 0; i < ys.size(); ++i) {
            out << fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(static_cast<double>(i)), py(ys[i]));
        }
        out << "\"/>\n";
    }

    void legend(std::ostream &out, std::size_t slot, std::string_view label, std::string_view color) const {
        const double x = kLeft + 10 + 170.0 * static_cast<double>(slot);
        out << fmt::format(R"svg(<rect x="{}" y="{}" width="12" height="12" fill="{}"/>)svg", x, kTop - 2, color) << '\n';
        out << fmt::format(R"svg(<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>)svg", x + 16, kTop + 9,
                           escape(label))
            << '\n';
    }

  private:
    void axes(std::ostream &out) const {
        const double x0 = kLeft;
        const double x1 = kWidth - kRight;
        const double y0 = kTop;
        const double y1 = kHeight - kBottom;
        out << fmt::format(R"svg(<g class="axes" stroke="black" stroke-width="1"><line x1="{0}" y1="{2}" x2="{1}" y2="{2}"/><line x1="{0}" y1="{3}" x2="{0}" y2="{2}"/></g>)svg",
                           x0, x1, y1, y0)
            << '\n';
        out << R"svg(<g class="ticks" font-family="sans-serif" font-size="11">)svg" << '\n';
        constexpr int kTicks = 5;
        for (int i = 0; i <= kTicks; ++i) {
            const double f = static_cast<double>(i) / kTicks;
            const double xv = f * xmax_;
            const double yv = ymin_ + f * (ymax_ - ymin_);
            out << fmt::format(R"svg(<text x="{:.2f}" y="{:.2f}" text-anchor="middle">{}</text>)svg", px(xv), y1 + 16,
                               fmt::format("{:.0f}", xv))
                << '\n';
            if (std::isfinite(yv)) {
                out << fmt::format(R"svg(<text x="{:.2f}" y="{:.2f}" text-anchor="end">{}</text>)svg", x0 - 6, py(yv) + 4,
                                   fmt::format("{:.4g}", yv))
                    << '\n';
            }
        }
        out << "</g>\n";
        out << fmt::format(R"svg(<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>)svg",
                           (x0 + x1) / 2, kHeight - 16, escape(xlabel_))
            << '\n';
        out << fmt::format(R"svg(<text x="18" y="{0}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>)svg",
                           (y0 + y1) / 2, escape(ylabel_))
            << '\n';
    }

    std::string title_;
    std::string xlabel_;
    std::string ylabel_;
    double ymin_ = INFINITY;
    double ymax_ = -INFINITY;
    double xmax_ = 0.0;
};

double last_index(std::size_t n) { return n > 1 ? static_cast<double>(n - 1) : 1.0; }

} // namespace

void write_reward_curve_svg(std::ostream &out, const a3c::TrainingHistory &history, std::string_view stamp) {
    Chart chart("Training reward per episode", "Episode", "Episode reward (index points)");
    chart.fit(history.rewards, last_index(history.rewards.size()));
    chart.fit(history.moving_average, 0);
    chart.begin(out, stamp);
    chart.polyline(out, history.rewards, "#9db4d6", "series reward", 1.0);
    chart.polyline(out, history.moving_average, "#c0392b", "series moving-average", 2.0);
    chart.legend(out, 0, "reward", "#9db4d6");
    chart.legend(out, 1, "moving average", "#c0392b");
    Chart::end(out);
}

void write_action_timeline_svg(std::ostream &out, const a3c::EvaluationRun &run, std::string_view stamp) {
    std::vector<double> prices;
    for (const auto &s : run.steps) {
        prices.push_back(s.price);
    }
    Chart chart("Action timeline", "Week", "Close (index points)");
    chart.fit(prices, last_index(prices.size()));
    chart.begin(out, stamp);
    chart.polyline(out, prices, "#34495e", "series price");
    for (std::size_t t = 0; t < run.steps.size(); ++t) {
        const auto &s = run.steps[t];
        if (s.action == tradeenv::Action::hold) {
            continue;
        }
        const bool buy = s.action == tradeenv::Action::buy;
        out << fmt::format(R"svg(<circle class="marker {}" cx="{:.2f}" cy="{:.2f}" r="4" fill="{}"><title>{} {} @ {}</title></circle>)svg",
                           buy ? "buy" : "sell", chart.px(static_cast<double>(t)), chart.py(s.price),
                           buy ? "#27ae60" : "#c0392b", s.date.iso(), buy ? "buy" : "sell", format_number(s.price))
            << '\n';
    }
    chart.legend(out, 0, "close", "#34495e");
    chart.legend(out, 1, "buy", "#27ae60");
    chart.legend(out, 2, "sell", "#c0392b");
    Chart::end(out);
}

void write_equity_curve_svg(std::ostream &out, const a3c::EvaluationRun &run, std::string_view stamp) {
    const auto values = run.asset_history();
    Chart chart("Equity curve", "Week", "Asset value (index points)");
    chart.fit(values, last_index(values.size()));
    chart.begin(out, stamp);
    chart.polyline(out, values, "#2c3e50", "series asset-value", 2.0);
    chart.legend(out, 0, "asset value", "#2c3e50");
    Chart::end(out);
}

a3c::TrainingHistory read_history_csv(std::istream &in) {
    const auto table = read_csv(in);
    for (const char *col : {"episode", "reward", "moving_average"}) {
        if (!table.has_column(col)) {
            throw IngestionError(fmt::format("training history CSV lacks column '{}'", col));
        }
    }
    const auto reward = table.column("reward");
    const auto ma = table.column("moving_average");
    a3c::TrainingHistory h;
    for (const auto &rec : table.records) {
        try {
            h.rewards.push_back(std::stod(rec.fields[reward]));
            h.moving_average.push_back(std::stod(rec.fields[ma]));
        } catch (const std::exception &) {
            throw IngestionError(fmt::format("training history line {}: unparseable number", rec.line));
        }
    }
    return h;
}

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path &dir, bool require_history,
                                              std::string_view stamp) {
    namespace fs = std::filesystem;
    const auto open = [](const fs::path &p) {
        std::ifstream in(p);
        if (!in) {
            throw UsageError(fmt::format("cannot plot: missing CSV '{}'", p.string()));
        }
        return in;
    };
    const auto write = [](const fs::path &p, const auto &fn) {
        std::ofstream out(p);
        if (!out) {
            throw UsageError(fmt::format("cannot write '{}'", p.string()));
        }
        fn(out);
    };

    std::vector<fs::path> written;
    const fs::path history_csv = dir / "training_history.csv";
    if (require_history || fs::exists(history_csv)) {
        auto in = open(history_csv);
        const auto history = read_history_csv(in);
        const auto svg = dir / "reward_curve.svg";
        write(svg, [&](std::ostream &o) { write_reward_curve_svg(o, history, stamp); });
        written.push_back(svg);
    }
    auto in = open(dir / "evaluation.csv");
    const auto run = a3c::read_evaluation_csv(in, 0.0);
    const auto timeline = dir / "action_timeline.svg";
    write(timeline, [&](std::ostream &o) { write_action_timeline_svg(o, run, stamp); });
    written.push_back(timeline);
    const auto equity = dir / "equity_curve.svg";
    write(equity, [&](std::ostream &o) { write_equity_curve_svg(o, run, stamp); });
    written.push_back(equity);
    return written;
}

} // namespace qtrader::app
