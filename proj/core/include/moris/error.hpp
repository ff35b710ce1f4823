// SPDX-License-Identifier: Apache-2.0
//
// moris - analysis and simulation of multi-operator RIS links
// Copyright (C) 2026 The moris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MORIS_ERROR_HPP
#define MORIS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace moris {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
    domain,       ///< argument outside the mathematical domain of a function
    config,       ///< invalid or inconsistent user configuration
    convergence,  ///< iterative method or quadrature missed its error target
    degenerate,   ///< inputs describe a degenerate distribution (e.g. zero variance)
    io            ///< file system or stream failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    [[nodiscard]] ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorCategory::domain, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error(ErrorCategory::convergence, what) {}
};

class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error(ErrorCategory::degenerate, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

[[nodiscard]] const char* to_string(ErrorCategory category) noexcept;

}  // namespace moris

#endif  // MORIS_ERROR_HPP
