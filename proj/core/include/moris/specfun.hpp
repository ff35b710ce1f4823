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

#ifndef MORIS_SPECFUN_HPP
#define MORIS_SPECFUN_HPP

#include <complex>

namespace moris::specfun {

/// Truncation control for series and contour evaluations.
struct Accuracy {
    double relative_tolerance = 1e-15;
    int max_terms = 200000;

    /// Throws DomainError unless relative_tolerance is in (0, 1e-3] and max_terms >= 1.
    void validate() const;
};

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// ln Gamma(x) for x > 0.
[[nodiscard]] double log_gamma(double x);

/// ln Gamma(z) for Re z > 0 (Lanczos, g = 7). The imaginary part is only
/// meaningful modulo 2 pi.
[[nodiscard]] std::complex<double> log_gamma(std::complex<double> z);

/// psi(x) = d/dx ln Gamma(x) for x > 0.
[[nodiscard]] double digamma(double x);

/// Modified Bessel function of the first kind, order 0 or 1.
[[nodiscard]] double bessel_i(int order, double x);

/// exp(-x) I_order(x); finite for every x >= 0.
[[nodiscard]] double bessel_i_scaled(int order, double x);

/// I_1(x) / I_0(x), in [0, 1).
[[nodiscard]] double bessel_ratio_i1_i0(double x);

/// First-order Marcum Q-function Q_1(a, b).
///
/// Evaluated from the Neumann series sum_k (a/b)^k I_k(ab) when a < b and
/// from its complement otherwise, so every summed term is positive. Bessel
/// ratios I_k/I_{k-1} come from a backward recurrence; the I_0 prefactor uses
/// the exponentially scaled form once a*b >= 30.
[[nodiscard]] double marcum_q1(double a, double b);

/// Gauss hypergeometric 2F1(-1/2, -1/2; m; x) for m > 0 and 0 <= x <= 1.
[[nodiscard]] double hyp2f1_half(double m, double x, const Accuracy& accuracy = {});

/// Exponential integral E1(x) = Gamma(0, x) for x > 0.
[[nodiscard]] double exp_integral_gamma0(double x);

/// E1(x) + ln(x), accurate as x -> 0 where both terms diverge.
[[nodiscard]] double exp_integral_e1_plus_log(double x);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
[[nodiscard]] double regularized_upper_gamma(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
[[nodiscard]] double regularized_lower_gamma(double a, double x);

/// G^{2,2}_{3,2}[z | (1-alpha)/2, 1-alpha/2, 1 ; 0, 0] by Mellin-Barnes
/// contour quadrature.
///
/// After Gamma(-s)^2 / Gamma(1-s) = Gamma(1-s) / s^2 the integrand is
/// Gamma(1-s) Gamma((1+alpha)/2 + s) Gamma(alpha/2 + s) z^s / s^2, taken along
/// Re(s) = -min(alpha/2, 1)/2, which separates the double pole at s = 0 (and
/// the simple poles at s = 1, 2, ...) from the left pole families. The tail
/// is cut where the integrand falls below 1e-16 of its peak. Throws
/// ConvergenceError if the quadrature error estimate misses the tolerance.
[[nodiscard]] double meijer_g_2232(double alpha, double z, const Accuracy& accuracy = {});

/// exp(log_scale) * meijer_g_2232(alpha, z), evaluated in log space so that
/// large alpha neither overflows the contour integrand nor the result.
[[nodiscard]] double meijer_g_2232_scaled(double alpha, double z, double log_scale,
                                          const Accuracy& accuracy = {});

}  // namespace moris::specfun

#endif  // MORIS_SPECFUN_HPP
