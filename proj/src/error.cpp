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

#include "esclab/error.hpp"

#include <string>

namespace esclab {

DimensionError::DimensionError(const std::string& what, std::size_t expected, std::size_t got)
    : Error(what + ": expected length " + std::to_string(expected) + ", got " +
            std::to_string(got)),
      expected_(expected),
      got_(got) {}

ParseError::ParseError(ParseErrc code, std::size_t position, const std::string& message)
    : Error(message + " at position " + std::to_string(position)),
      code_(code),
      position_(position) {}

namespace {

std::string format_state(double t, const Vector& state) {
  std::string s = "non-finite state at t=" + std::to_string(t) + ": [";
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(state[i]);
  }
  return s + "]";
}

}  // namespace

IntegrationError::IntegrationError(double t, Vector state)
    : Error(format_state(t, state)), t_(t), state_(std::move(state)) {}

}  // namespace esclab
