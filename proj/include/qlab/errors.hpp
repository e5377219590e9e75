// Copyright 2026 The qlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimensions, broken invariants, bad parameters.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A scalar function was asked for a value outside its domain.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// An exact enumeration would exceed its size guard.
class CapacityError : public Error {
  public:
    CapacityError(std::string parameter, const std::string &what)
        : Error(what), parameter_(std::move(parameter)) {}
    [[nodiscard]] const std::string &parameter() const noexcept {
        return parameter_;
    }

  private:
    std::string parameter_;
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Every posterior weight vanished (data outside all supports).
class DegeneratePosteriorError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// Malformed configuration text; carries the 1-based line and column.
class ParseError : public ValidationError {
  public:
    ParseError(const std::string &what, std::size_t line, std::size_t column)
        : ValidationError(what), line_(line), column_(column) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// Aggregated semantic errors of a configuration (all of them, not the first).
class ConfigError : public ValidationError {
  public:
    explicit ConfigError(std::vector<std::string> errors)
        : ValidationError(join(errors)), errors_(std::move(errors)) {}
    [[nodiscard]] const std::vector<std::string> &errors() const noexcept {
        return errors_;
    }

  private:
    static std::string join(const std::vector<std::string> &errors) {
        std::string out;
        for (const auto &e : errors) {
            if (!out.empty()) {
                out += "; ";
            }
            out += e;
        }
        return out;
    }
    std::vector<std::string> errors_;
};

} // namespace qlab
