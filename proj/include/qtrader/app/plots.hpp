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

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "qtrader/a3c/evaluate.hpp"
#include "qtrader/a3c/trainer.hpp"

namespace qtrader::app {

/// Raw episode rewards plus the moving average.
void write_reward_curve_svg(std::ostream &out, const a3c::TrainingHistory &history, std::string_view stamp = {});
/// Close price line with one marker (class "marker buy" / "marker sell") per executed trade action.
void write_action_timeline_svg(std::ostream &out, const a3c::EvaluationRun &run, std::string_view stamp = {});
/// Asset value over the evaluation run.
void write_equity_curve_svg(std::ostream &out, const a3c::EvaluationRun &run, std::string_view stamp = {});

/// Renders the SVGs of a run directory from its CSVs: reward_curve.svg from training_history.csv
/// (when present, or when `require_history`), action_timeline.svg and equity_curve.svg from
/// evaluation.csv. Returns the files written. Throws UsageError naming a missing CSV.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path &dir, bool require_history,
                                              std::string_view stamp = {});

/// Inverse of a3c::write_history_csv. Throws IngestionError.
a3c::TrainingHistory read_history_csv(std::istream &in);

} // namespace qtrader::app
