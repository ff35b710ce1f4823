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

#ifndef MORIS_QUADRATURE_HPP
#define MORIS_QUADRATURE_HPP

#include <functional>
#include <span>

namespace moris::quad {

using Integrand = std::function<double(double)>;

struct Options {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_subdivisions = 4000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b]. The
/// interval with the largest error estimate is bisected until the summed
/// estimate meets max(abs_tol, rel_tol * |value|).
[[nodiscard]] Result integrate(const Integrand& f, double a, double b, const Options& options = {});

/// Same, starting from the partition given by sorted `breakpoints`
/// (first and last entries are the integration limits).
[[nodiscard]] Result integrate(const Integrand& f, std::span<const double> breakpoints,
                               const Options& options = {});

/// Integral over [a, inf) through the map x = a + (1 - u) / u.
[[nodiscard]] Result integrate_to_infinity(const Integrand& f, double a, const Options& options = {});

/// E[f(X)] for X ~ Gamma(shape alpha, scale beta).
///
/// The support is cut at the upper point where the Gamma tail drops below
/// 1e-18 and partitioned around the mode in standard-deviation steps; the
/// mode of f * pdf located by a coarse scan is added as a breakpoint, as are
/// any `extra_breakpoints` (in x units). For alpha < 1 the piece [0, beta]
/// is integrated in w = (x/beta)^alpha, which removes the x^(alpha-1) pole.
[[nodiscard]] Result gamma_expectation(double alpha, double beta, const Integrand& f,
                                       std::span<const double> extra_breakpoints = {},
                                       const Options& options = {});

}  // namespace moris::quad

#endif  // MORIS_QUADRATURE_HPP
