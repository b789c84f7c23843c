// Copyright 2026 The qilqr Authors
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

namespace qilqr {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A real matrix that should carry the [[Re, -Im], [Im, Re]] structure does not.
class BlockStructureViolation : public Error {
 public:
  using Error::Error;
};

/// The Pade denominator polynomial could not be factorized.
class SingularDenominator : public Error {
 public:
  using Error::Error;
};

class NonUnitaryInput : public Error {
 public:
  using Error::Error;
};

/// Regularized Q_uu is not positive definite at `stage`.
class FactorizationFailure : public Error {
 public:
  FactorizationFailure(std::size_t stage, const std::string& what)
      : Error(what), stage_(stage) {}
  std::size_t stage() const noexcept { return stage_; }

 private:
  std::size_t stage_;
};

class NonFiniteCost : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration. `field()` holds the offending key path, e.g. "costs.q-f".
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qilqr
