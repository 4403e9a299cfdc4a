// Copyright 2026 The UED Authors.
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

namespace ued {

// Invalid static parameters, experiment configuration or CLI usage.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation precondition (e.g. stepping a terminal state).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A value failed a domain invariant check (e.g. agent placed on a wall).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched batch / array dimensions.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced NaN/Inf somewhere in the loss or gradients.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed level text. line/col are 1-based; 0 means "whole input".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int col)
      : std::runtime_error(Format(what, line, col)), line_(line), col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  static std::string Format(const std::string& what, int line, int col) {
    if (line <= 0) return what;
    return "line " + std::to_string(line) + ", col " + std::to_string(col) +
           ": " + what;
  }

  int line_;
  int col_;
};

}  // namespace ued
