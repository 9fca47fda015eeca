// Copyright 2026 The hereditary-mms Authors.
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

namespace hmms {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown item ids, mismatched ground sets, malformed arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed instance or allocation document. Carries a line number when one
/// is known (0 otherwise) and the JSON path of the offending field.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::string field = {})
      : Error(format(what, line, field)), line_(line), field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& what, std::size_t line, const std::string& field) {
    std::string out = "parse error";
    if (line != 0) out += " at line " + std::to_string(line);
    if (!field.empty()) out += " in field '" + field + "'";
    return out + ": " + what;
  }

  std::size_t line_;
  std::string field_;
};

/// A desk-scale cap (exhaustive search size) was exceeded.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Invalid solver configuration, e.g. delta outside (0, 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Normalizing against a part of value zero.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// MinimalSet called while no remaining agent reaches its threshold.
class NoEligibleAgentError : public Error {
 public:
  using Error::Error;
};

}  // namespace hmms
