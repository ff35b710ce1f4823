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

#include "moris/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "moris/error.hpp"
#include "moris/quadrature.hpp"

namespace moris {

const char* to_string(ErrorCategory category) noexcept {
    switch (category) {
        case ErrorCategory::domain: return "domain";
        case ErrorCategory::config: return "config";
        case ErrorCategory::convergence: return "convergence";
        case ErrorCategory::degenerate: return "degenerate";
        case ErrorCategory::io: return "io";
    }
    return "unknown";
}

}  // namespace moris

namespace moris::specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Below this the power series for I_0/I_1 is used directly; above it the
// Hankel asymptotic expansion of the scaled function.
constexpr double kBesselSeriesLimit = 30.0;

// a*b threshold above which Marcum Q uses the scaled I_0 prefactor.
constexpr double kMarcumScaledLimit = 30.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_positive(double x, const char* fn) {
    if (!(x > 0.0)) throw DomainError(std::string(fn) + ": argument must be > 0, got " + fmt(x));
}

void require_nonnegative(double x, const char* fn) {
    if (!(x >= 0.0)) throw DomainError(std::string(fn) + ": argument must be >= 0, got " + fmt(x));
}

void require_order(int order, const char* fn) {
    if (order != 0 && order != 1) {
        throw DomainError(std::string(fn) + ": only orders 0 and 1 are supported, got " +
                          std::to_string(order));
    }
}

// sum_k (x/2)^(2k+n) / (k! (k+n)!), all terms positive.
double bessel_i_series(int order, double x) {
    const double q = 0.25 * x * x;
    double term = order == 0 ? 1.0 : 0.5 * x;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
        sum += term;
        if (term < kEps * 0.25 * sum) break;
    }
    return sum;
}

// exp(-x) I_n(x) ~ (2 pi x)^(-1/2) sum_k (-1)^k prod_{j<=k}(4n^2 - (2j-1)^2) / (k! (8x)^k)
double bessel_i_asymptotic_scaled(int order, double x) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(term)) break;  // asymptotic series turned
        term = next;
        sum += term;
        if (std::abs(term) < 0.25 * kEps * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * kPi * x);
}

// Lanczos approximation, g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// ln Gamma(z) for Re z >= 0.5.
std::complex<double> lanczos_log_gamma(std::complex<double> z) {
    const std::complex<double> zm1 = z - 1.0;
    std::complex<double> series = kLanczos[0];
    for (int i = 1; i < 9; ++i) series += kLanczos[i] / (zm1 + static_cast<double>(i));
    const std::complex<double> t = zm1 + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (zm1 + 0.5) * std::log(t) - t + std::log(series);
}

// Sum of 2F1(-1/2,-1/2;m;x) for x close to 1: direct terms up to n = N, then
// Euler-Maclaurin on the smooth continuation
//   f(n) = Gamma(m)/(4 pi) Gamma(n-1/2)^2 / (Gamma(n+m) Gamma(n+1)) x^n.
double hyp2f1_half_near_one(double m, double x, const Accuracy& accuracy) {
    constexpr int kDirect = 256;
    double term = 1.0;
    double sum = 1.0;
    double comp = 0.0;
    for (int n = 0; n < kDirect; ++n) {
        const double a = n - 0.5;
        term *= a * a * x / ((m + n) * (n + 1.0));
        const double t = sum + term;
        comp += (sum - t) + term;
        sum = t;
    }
    const double log_c = std::lgamma(m) - std::log(4.0 * kPi);
    const double log_x = std::log(x);
    const auto log_f = [&](double n) {
        return log_c + 2.0 * std::lgamma(n - 0.5) - std::lgamma(n + m) - std::lgamma(n + 1.0) +
               n * log_x;
    };
    const double n0 = kDirect + 1.0;  // first index not yet summed
    const double f0 = std::exp(log_f(n0));
    const double dlog = 2.0 * digamma(n0 - 0.5) - digamma(n0 + m) - digamma(n0 + 1.0) + log_x;
    const double df0 = f0 * dlog;

    // int_{n0}^inf f(n) dn with n = n0 / u.
    const quad::Integrand tail = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double n = n0 / u;
        const double lf = log_f(n);
        if (lf < -745.0) return 0.0;
        return std::exp(lf) * n0 / (u * u);
    };
    quad::Options opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = std::max(accuracy.relative_tolerance, 1e-14);
    const quad::Result r = quad::integrate(tail, 0.0, 1.0, opt);
    if (!r.converged && r.abs_error > 1e-13 * std::abs(r.value)) {
        throw ConvergenceError("hyp2f1_half: tail quadrature did not converge at x = " + fmt(x));
    }
    const double tail_sum = r.value + 0.5 * f0 - df0 / 12.0;
    return sum + comp + tail_sum;
}

// Continued fraction for Q(a, x), x >= a + 1 (modified Lentz).
double upper_gamma_cf(double a, double x, double log_prefactor) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return std::exp(log_prefactor) * h;
    }
    throw ConvergenceError("regularized_upper_gamma: continued fraction failed for a = " + fmt(a) +
                           ", x = " + fmt(x));
}

// Series for P(a, x), x < a + 1.
double lower_gamma_series(double a, double x, double log_prefactor) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 100000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) return sum * std::exp(log_prefactor);
    }
    throw ConvergenceError("regularized_lower_gamma: series failed for a = " + fmt(a) +
                           ", x = " + fmt(x));
}

}  // namespace

void Accuracy::validate() const {
    if (!(relative_tolerance > 0.0 && relative_tolerance <= 1e-3)) {
        throw DomainError("Accuracy: relative_tolerance must lie in (0, 1e-3], got " +
                          fmt(relative_tolerance));
    }
    if (max_terms < 1) throw DomainError("Accuracy: max_terms must be >= 1");
}

double log_gamma(double x) {
    require_positive(x, "log_gamma");
    return std::lgamma(x);
}

std::complex<double> log_gamma(std::complex<double> z) {
    if (!(z.real() > 0.0)) throw DomainError("log_gamma: complex argument needs Re z > 0");
    if (z.real() >= 0.5) return lanczos_log_gamma(z);
    return lanczos_log_gamma(z + 1.0) - std::log(z);
}

double digamma(double x) {
    require_positive(x, "digamma");
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // -sum B_{2k} / (2k x^{2k}), k = 1..7
    const double series =
        inv2 * (-1.0 / 12.0 +
                inv2 * (1.0 / 120.0 +
                        inv2 * (-1.0 / 252.0 +
                                inv2 * (1.0 / 240.0 +
                                        inv2 * (-1.0 / 132.0 +
                                                inv2 * (691.0 / 32760.0 + inv2 * (-1.0 / 12.0)))))));
    return shift + std::log(x) - 0.5 * inv + series;
}

double bessel_i(int order, double x) {
    require_order(order, "bessel_i");
    require_nonnegative(x, "bessel_i");
    if (x <= kBesselSeriesLimit) return bessel_i_series(order, x);
    return std::exp(x) * bessel_i_asymptotic_scaled(order, x);
}

double bessel_i_scaled(int order, double x) {
    require_order(order, "bessel_i_scaled");
    require_nonnegative(x, "bessel_i_scaled");
    if (x <= kBesselSeriesLimit) return bessel_i_series(order, x) * std::exp(-x);
    return bessel_i_asymptotic_scaled(order, x);
}

double bessel_ratio_i1_i0(double x) {
    require_nonnegative(x, "bessel_ratio_i1_i0");
    if (x == 0.0) return 0.0;
    return bessel_i_scaled(1, x) / bessel_i_scaled(0, x);
}

double marcum_q1(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0)) {
        throw DomainError("marcum_q1: arguments must be >= 0, got a = " + fmt(a) + ", b = " + fmt(b));
    }
    if (b == 0.0) return 1.0;
    if (a == 0.0) return std::exp(-0.5 * b * b);

    const double x = a * b;
    // exp(-(a^2+b^2)/2) I_0(ab), the k = 0 Neumann term.
    const double prefactor = x < kMarcumScaledLimit
                                 ? std::exp(-0.5 * (a * a + b * b)) * bessel_i(0, x)
                                 : std::exp(-0.5 * (a - b) * (a - b)) * bessel_i_scaled(0, x);
    if (prefactor == 0.0) return a < b ? 0.0 : 1.0;

    // Ratios r_k = I_k(x) / I_{k-1}(x) by backward recurrence
    // r_k = x / (2k + x r_{k+1}).
    const int needed = 40 + static_cast<int>(std::ceil(10.0 * std::sqrt(x)));
    const int start = needed + 40 + static_cast<int>(std::ceil(std::sqrt(x)));
    std::vector<double> ratio(static_cast<std::size_t>(needed) + 1, 0.0);
    double r = 0.0;
    for (int k = start; k >= 1; --k) {
        r = x / (2.0 * k + x * r);
        if (k <= needed) ratio[static_cast<std::size_t>(k)] = r;
    }

    const bool below = a < b;
    const double q = below ? a / b : b / a;
    double term = 1.0;
    double sum = below ? 1.0 : 0.0;
    for (int k = 1; k <= needed; ++k) {
        term *= q * ratio[static_cast<std::size_t>(k)];
        sum += term;
        if (term < 1e-18 * std::max(sum, 1e-300)) break;
    }
    const double tail = prefactor * sum;
    const double value = below ? tail : 1.0 - tail;
    return std::clamp(value, 0.0, 1.0);
}

double hyp2f1_half(double m, double x, const Accuracy& accuracy) {
    accuracy.validate();
    require_positive(m, "hyp2f1_half (m)");
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("hyp2f1_half: x must lie in [0, 1], got " + fmt(x));
    }
    if (x == 0.0) return 1.0;
    if (x == 1.0) {
        // Gauss: Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)).
        return std::exp(std::lgamma(m) + std::lgamma(m + 1.0) - 2.0 * std::lgamma(m + 0.5));
    }
    if (x > 0.9) return hyp2f1_half_near_one(m, x, accuracy);

    // ((-1/2)_n)^2 > 0, so every term is positive.
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < accuracy.max_terms; ++n) {
        const double a = n - 0.5;
        term *= a * a * x / ((m + n) * (n + 1.0));
        sum += term;
        if (term < accuracy.relative_tolerance * sum) return sum;
    }
    throw ConvergenceError("hyp2f1_half: series exceeded max_terms at x = " + fmt(x));
}

double exp_integral_gamma0(double x) {
    require_positive(x, "exp_integral_gamma0");
    if (x < 1.0) return exp_integral_e1_plus_log(x) - std::log(x);
    // Continued fraction (modified Lentz).
    double b = x + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h * std::exp(-x);
    }
    throw ConvergenceError("exp_integral_gamma0: continued fraction failed at x = " + fmt(x));
}

double exp_integral_e1_plus_log(double x) {
    require_positive(x, "exp_integral_e1_plus_log");
    if (x >= 1.0) return exp_integral_gamma0(x) + std::log(x);
    // -gamma + Ein(x), Ein(x) = sum_{k>=1} (-1)^{k+1} x^k / (k k!)
    double term = 1.0;  // (-1)^{k+1} x^k / k!
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= (k == 1 ? x : -x / k);
        const double add = term / k;
        sum += add;
        if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    return -euler_gamma + sum;
}

double regularized_upper_gamma(double a, double x) {
    require_positive(a, "regularized_upper_gamma (a)");
    require_nonnegative(x, "regularized_upper_gamma (x)");
    if (x == 0.0) return 1.0;
    const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) return std::clamp(1.0 - lower_gamma_series(a, x, log_prefactor), 0.0, 1.0);
    return std::clamp(upper_gamma_cf(a, x, log_prefactor), 0.0, 1.0);
}

double regularized_lower_gamma(double a, double x) {
    require_positive(a, "regularized_lower_gamma (a)");
    require_nonnegative(x, "regularized_lower_gamma (x)");
    if (x == 0.0) return 0.0;
    const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) return std::clamp(lower_gamma_series(a, x, log_prefactor), 0.0, 1.0);
    return std::clamp(1.0 - upper_gamma_cf(a, x, log_prefactor), 0.0, 1.0);
}

double meijer_g_2232_scaled(double alpha, double z, double log_scale, const Accuracy& accuracy) {
    accuracy.validate();
    require_positive(alpha, "meijer_g_2232 (alpha)");
    require_positive(z, "meijer_g_2232 (z)");

    const double a1 = 0.5 * (1.0 + alpha);
    const double a2 = 0.5 * alpha;
    const double log_z = std::log(z);

    // The contour Re s = c may sit anywhere in (-alpha/2, 0). The modulus on
    // the real axis is log-convex there; crossing at its minimum (the saddle)
    // keeps the oscillatory cancellation along the line to a few digits.
    const auto log_modulus = [&](double x) {
        return std::lgamma(1.0 - x) + std::lgamma(a1 + x) + std::lgamma(a2 + x) + x * log_z -
               2.0 * std::log(-x);
    };
    double lo = -a2 * (1.0 - 1e-9);
    double hi = -a2 * 1e-9;
    constexpr double kGolden = 0.6180339887498949;
    for (int i = 0; i < 200 && hi - lo > 1e-10 * a2; ++i) {
        const double x1 = hi - kGolden * (hi - lo);
        const double x2 = lo + kGolden * (hi - lo);
        if (log_modulus(x1) < log_modulus(x2)) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    const double c = 0.5 * (lo + hi);

    const auto log_integrand = [&](double t) {
        const std::complex<double> s(c, t);
        return log_gamma(1.0 - s) + log_gamma(a1 + s) + log_gamma(a2 + s) + s * log_z -
               2.0 * std::log(s);
    };

    // Locate the peak of |integrand| and the truncation point where it has
    // fallen below 1e-16 of the peak on the decaying side.
    constexpr double kCut = 36.841361487904734;  // -ln(1e-16)
    constexpr double kStep = 0.25;
    double peak = log_integrand(0.0).real();
    double t = 0.0;
    double previous = peak;
    for (;;) {
        t += kStep;
        if (t > 1e4) throw ConvergenceError("meijer_g_2232: integrand does not decay");
        const double v = log_integrand(t).real();
        peak = std::max(peak, v);
        if (v < peak - kCut && v < previous) break;
        previous = v;
    }
    const double upper = t;

    const quad::Integrand body = [&](double tt) {
        const std::complex<double> l = log_integrand(tt);
        return std::exp(l.real() - peak) * std::cos(l.imag());
    };

    // Initial partition resolves the z^{it} oscillation.
    const double period = 2.0 * kPi / (std::abs(log_z) + 3.0 * std::log(2.0 + upper) + 1.0);
    const int pieces = std::clamp(static_cast<int>(std::ceil(upper / (0.5 * period))), 8, 4000);
    std::vector<double> bp(static_cast<std::size_t>(pieces) + 1);
    for (int i = 0; i <= pieces; ++i) bp[static_cast<std::size_t>(i)] = upper * i / pieces;

    quad::Options opt;
    opt.rel_tol = std::max(accuracy.relative_tolerance, 1e-12);
    opt.abs_tol = 1e-13;  // relative to the peak, which is normalized to 1
    opt.max_subdivisions = 20000;
    const quad::Result r = quad::integrate(body, bp, opt);
    if (!r.converged) {
        throw ConvergenceError("meijer_g_2232: contour quadrature error estimate " + fmt(r.abs_error) +
                               " exceeds tolerance (alpha = " + fmt(alpha) + ", z = " + fmt(z) + ")");
    }
    return r.value / kPi * std::exp(peak + log_scale);
}

double meijer_g_2232(double alpha, double z, const Accuracy& accuracy) {
    return meijer_g_2232_scaled(alpha, z, 0.0, accuracy);
}

}  // namespace moris::specfun
