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

#ifndef MORIS_RNG_HPP
#define MORIS_RNG_HPP

#include <array>
#include <cstdint>

namespace moris::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
[[nodiscard]] Counter philox4x32_10(Counter counter, Key key) noexcept;

/// Random stream addressed by (seed, frame, substream). Distinct addresses
/// give statistically independent streams; the same address always gives the
/// same stream, independent of thread scheduling.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t frame, std::uint32_t substream) noexcept;

    std::uint32_t next_u32() noexcept;

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform() noexcept;

    /// Uniform angle on [-pi, pi).
    double uniform_angle() noexcept;

    /// Standard normal (Box-Muller, both variates used).
    double normal() noexcept;

private:
    void refill() noexcept;

    Key key_;
    Counter counter_;
    Counter buffer_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace moris::rng

#endif  // MORIS_RNG_HPP
