// Copyright 2026 The oddcov Authors
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

namespace oddcov {

// Base for every failure the library reports. The CLI maps the subclasses
// onto exit codes: SpecError -> 1, DataError -> 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent ODD specification (including constraint text).
class SpecError : public Error {
 public:
  using Error::Error;
};

// Constraint expression syntax error; offset is a byte offset into the source.
class ParseError : public SpecError {
 public:
  ParseError(std::string message, std::size_t offset)
      : SpecError(message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Constraint evaluation failure (division by zero, ln of a non-positive
// value, non-finite result). Never mapped to "false".
class EvalError : public SpecError {
 public:
  using SpecError::SpecError;
};

// A covered set or gap list produced under a different spec fingerprint.
class HashMismatch : public SpecError {
 public:
  using SpecError::SpecError;
};

// Unreadable dataset, missing column, or an out-of-range row under the
// `error` policy.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace oddcov
