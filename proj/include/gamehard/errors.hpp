// Copyright 2026 The gamehard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAMEHARD_ERRORS_HPP_
#define GAMEHARD_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gamehard {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes do not line up (profile length vs strategy count, player count...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Malformed textual input. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates an operation's precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input exceeds a configured brute-force bound.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The operation declines to answer because the answer would be unsound
// (incomplete enumeration, degenerate game).
class Refusal : public Error {
 public:
  using Error::Error;
};

// An equilibrium did not have any of the shapes the construction admits.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace gamehard

#endif  // GAMEHARD_ERRORS_HPP_
