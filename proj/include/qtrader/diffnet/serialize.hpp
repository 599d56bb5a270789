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

#include "qtrader/diffnet/parameter.hpp"

/// Checkpoint format (all integers and floats little-endian):
///
///   magic       8 bytes   "QTRPAR01"
///   count       u32       number of tensors
///   count x {
///     name_len  u32
///     name      name_len bytes, UTF-8, no terminator
///     rank      u32
///     dims      rank x u64
///   }
///   data        for each tensor in header order, prod(dims) x f64
///
/// Loading checks that names and shapes match the target model exactly.
namespace qtrader::diffnet {

void write_parameters(std::ostream &out, const ConstParameterList &params);
void read_parameters(std::istream &in, const ParameterList &params);

void save_parameters(const std::filesystem::path &path, const ConstParameterList &params);
void load_parameters(const std::filesystem::path &path, const ParameterList &params);

} // namespace qtrader::diffnet
