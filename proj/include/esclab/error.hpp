// Copyright 2026 The esc-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ESCLAB_ERROR_HPP
#define ESCLAB_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace esclab {

using Vector = std::vector<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or state lengths that do not agree with the declared dimension.
class DimensionError : public Error {
 public:
  DimensionError(const std::string& what, std::size_t expected, std::size_t got);

  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

/// A parameter outside its admissible range (non-positive gain, empty box, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

enum class DitherErrc {
  size_mismatch,
  zero_amplitude,
  nonpositive_rate,
  duplicate_rate,
  nonpositive_omega,
};

class DitherError : public Error {
 public:
  DitherError(DitherErrc code, const std::string& what) : Error(what), code_(code) {}
  DitherErrc code() const noexcept { return code_; }

 private:
  DitherErrc code_;
};

enum class ParseErrc {
  syntax,
  unknown_identifier,
  wrong_arity,
};

/// Cost expression parse failure. `position()` is 1-based; a position one past
/// the last character means the input ended early.
class ParseError : public Error {
 public:
  ParseError(ParseErrc code, std::size_t position, const std::string& message);

  ParseErrc code() const noexcept { return code_; }
  std::size_t position() const noexcept { return position_; }

 private:
  ParseErrc code_;
  std::size_t position_;
};

/// The integrator produced a NaN or infinity.
class IntegrationError : public Error {
 public:
  IntegrationError(double t, Vector state);

  double time() const noexcept { return t_; }
  const Vector& state() const noexcept { return state_; }

 private:
  double t_;
  Vector state_;
};

/// An iterative solver ran out of iterations.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A sublevel set reaches the boundary of the search box.
class LevelSetError : public Error {
 public:
  using Error::Error;
};

}  // namespace esclab

#endif  // ESCLAB_ERROR_HPP
