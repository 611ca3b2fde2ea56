// Copyright 2026 The swg Authors
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
#include <stdexcept>
#include <string>

namespace swg {

/// Invalid user input: bad pattern, parameter out of range, unknown config key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pattern DSL syntax error; `offset()` is the byte offset into the source.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : ConfigError(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Integrator breakdown (step-size underflow, non-finite amplitudes).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Eigendecomposition too close to an exceptional point to be trusted.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double residual)
      : std::runtime_error(what + " (biorthogonality residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace swg
