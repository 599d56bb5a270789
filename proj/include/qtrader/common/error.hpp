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

#include <stdexcept>
#include <string>

namespace qtrader {

/// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration value (qubit count out of range, bad hyperparameter, ...).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// API misuse: shape mismatch, index out of range, step after done.
class UsageError : public Error {
  public:
    using Error::Error;
};

/// Malformed market data file.
class IngestionError : public Error {
  public:
    using Error::Error;
};

/// Training produced non-finite values or a worker failed.
class TrainingError : public Error {
  public:
    using Error::Error;
};

/// Evaluation metric undefined for the given inputs.
class EvaluationError : public Error {
  public:
    using Error::Error;
};

/// Equity curve or return series violates a data precondition.
class DataError : public Error {
  public:
    using Error::Error;
};

} // namespace qtrader
