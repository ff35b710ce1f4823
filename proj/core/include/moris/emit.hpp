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

#ifndef MORIS_EMIT_HPP
#define MORIS_EMIT_HPP

#include <string>

#include "moris/experiment.hpp"

namespace moris::cli {

/// Writes the table as CSV (RFC 4180 quoting, shortest round-trip doubles).
/// Throws IoError for an empty table (no file is created) or a failed write.
void emit_csv(const ResultTable& table, const std::string& path);

[[nodiscard]] std::string format_csv(const ResultTable& table);

/// Inverse of emit_csv; throws IoError on unreadable input and ConfigError
/// on malformed content.
[[nodiscard]] ResultTable parse_csv(const std::string& path);
[[nodiscard]] ResultTable parse_csv_text(const std::string& text);

/// Static SVG line plot, one <g class="series"> group per case.
void emit_svg_plot(const ResultTable& table, const std::string& path);

[[nodiscard]] std::string format_svg(const ResultTable& table);

}  // namespace moris::cli

#endif  // MORIS_EMIT_HPP
