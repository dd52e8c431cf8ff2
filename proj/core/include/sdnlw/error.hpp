// Copyright 2026 The sdnlw Authors.
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

#ifndef SDNLW_ERROR_HPP
#define SDNLW_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sdnlw {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: wrong shapes, out-of-range parameters, malformed files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidMultiplierError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical failure during a computation (exit code 2 in the CLI).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BlowUpError : public NumericalError {
 public:
  BlowUpError(std::uint64_t step, const std::string& what)
      : NumericalError(what), step_(step) {}
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

class KernelFactorizationError : public NumericalError {
 public:
  KernelFactorizationError(int n1, int n2, const std::string& what)
      : NumericalError(what), n1_(n1), n2_(n2) {}
  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }

 private:
  int n1_;
  int n2_;
};

/// Two algebraically equal routes disagreed beyond tolerance.
class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateWeightsError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OptimizerDivergedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sdnlw

#endif  // SDNLW_ERROR_HPP
