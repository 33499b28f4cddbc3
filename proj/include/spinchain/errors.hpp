// Copyright 2026 The spinchain Authors
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
#include <utility>
#include <vector>

#include "spinchain/types.hpp"

namespace spinchain {

/// Process exit codes used by the simulate tool.
enum class ExitCode : int {
  success = 0,
  config_error = 2,
  solver_failure = 3,
  capacity_exceeded = 4,
  spectral_refused = 5,
};

/// Base of every error raised by the library. Each subclass maps to one
/// exit code of the command-line tool.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode exit_code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class ConfigError : public Error {
 public:
  enum class Kind { syntax, unknown_key, constraint, unsupported };

  ConfigError(Kind kind, std::string field, const std::string& what)
      : Error(ExitCode::config_error, what), kind_(kind), field_(std::move(field)) {}

  Kind kind() const noexcept { return kind_; }
  /// Dotted path of the offending field, or "line N" for syntax errors.
  const std::string& field() const noexcept { return field_; }

 private:
  Kind kind_;
  std::string field_;
};

/// Non-finite values appeared while time-stepping.
class IntegrationDivergedError : public Error {
 public:
  IntegrationDivergedError(double time, const std::string& what)
      : Error(ExitCode::solver_failure, what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A steady-state search hit t_max. Carries the last state reached.
class NotConvergedError : public Error {
 public:
  NotConvergedError(std::vector<Vec3> last_state, double residual, const std::string& what)
      : Error(ExitCode::solver_failure, what),
        last_state_(std::move(last_state)),
        residual_(residual) {}
  const std::vector<Vec3>& last_state() const noexcept { return last_state_; }
  double residual() const noexcept { return residual_; }

 private:
  std::vector<Vec3> last_state_;
  double residual_;
};

/// |M| = 0 where the normalized direction m = M/|M| is needed.
class ZeroMagnetizationError : public Error {
 public:
  explicit ZeroMagnetizationError(const std::string& what)
      : Error(ExitCode::solver_failure, what) {}
};

class CapacityError : public Error {
 public:
  CapacityError(int requested, int cap, const std::string& what)
      : Error(ExitCode::capacity_exceeded, what), requested_(requested), cap_(cap) {}
  int requested() const noexcept { return requested_; }
  int cap() const noexcept { return cap_; }

 private:
  int requested_;
  int cap_;
};

/// Eigenvector basis of the Liouvillian too ill-conditioned for the
/// spectral propagator; callers should time-step instead.
class SpectralUnreliableError : public Error {
 public:
  SpectralUnreliableError(double condition, const std::string& what)
      : Error(ExitCode::spectral_refused, what), condition_(condition) {}
  double condition_number() const noexcept { return condition_; }

 private:
  double condition_;
};

class NonUniqueSteadyStateError : public Error {
 public:
  NonUniqueSteadyStateError(int zero_modes, const std::string& what)
      : Error(ExitCode::solver_failure, what), zero_modes_(zero_modes) {}
  int zero_modes() const noexcept { return zero_modes_; }

 private:
  int zero_modes_;
};

}  // namespace spinchain
