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

#include "moris/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "moris/error.hpp"
#include "moris/specfun.hpp"

namespace moris::quad {
namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod_21(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_center = f(center);
    double kronrod = kWgk[10] * f_center;
    double gauss = 0.0;
    double abs_sum = std::abs(kronrod);
    std::array<double, 10> f1{};
    std::array<double, 10> f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        const double pair = f1[j] + f2[j];
        kronrod += kWgk[j] * pair;
        abs_sum += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double asc = kWgk[10] * std::abs(f_center - mean);
    for (int j = 0; j < 10; ++j) {
        asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double result = kronrod * half;
    abs_sum *= std::abs(half);
    asc *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0) {
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    if (abs_sum > tiny / (50.0 * eps)) err = std::max(50.0 * eps * abs_sum, err);
    if (!std::isfinite(result)) {
        throw DomainError("quadrature integrand is not finite on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
    }
    return {a, b, result, err};
}

// Neumaier-compensated sum over the segment heap.
void totals(const std::vector<Segment>& segments, double& value, double& error) {
    double sum = 0.0;
    double comp = 0.0;
    error = 0.0;
    for (const auto& s : segments) {
        const double t = sum + s.value;
        comp += std::abs(sum) >= std::abs(s.value) ? (sum - t) + s.value : (s.value - t) + sum;
        sum = t;
        error += s.error;
    }
    value = sum + comp;
}

}  // namespace

Result integrate(const Integrand& f, std::span<const double> breakpoints, const Options& options) {
    if (breakpoints.size() < 2) throw DomainError("integrate: need at least two breakpoints");
    std::vector<Segment> heap;
    heap.reserve(static_cast<std::size_t>(options.max_subdivisions) + breakpoints.size());
    Result out;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1])) {
            if (breakpoints[i] == breakpoints[i + 1]) continue;
            throw DomainError("integrate: breakpoints must be increasing");
        }
        heap.push_back(gauss_kronrod_21(f, breakpoints[i], breakpoints[i + 1]));
        out.evaluations += 21;
    }
    if (heap.empty()) {
        out.converged = true;
        return out;
    }
    std::make_heap(heap.begin(), heap.end());

    double value = 0.0;
    double error = 0.0;
    totals(heap, value, error);
    int splits = 0;
    while (error > std::max(options.abs_tol, options.rel_tol * std::abs(value))) {
        if (splits >= options.max_subdivisions) break;
        std::pop_heap(heap.begin(), heap.end());
        const Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval cannot be split further in floating point.
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            break;
        }
        heap.push_back(gauss_kronrod_21(f, worst.a, mid));
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(gauss_kronrod_21(f, mid, worst.b));
        std::push_heap(heap.begin(), heap.end());
        out.evaluations += 42;
        ++splits;
        totals(heap, value, error);
    }
    totals(heap, value, error);
    out.value = value;
    out.abs_error = error;
    out.converged = error <= std::max(options.abs_tol, options.rel_tol * std::abs(value));
    return out;
}

Result integrate(const Integrand& f, double a, double b, const Options& options) {
    if (a == b) return {0.0, 0.0, 0, true};
    if (a > b) {
        Result r = integrate(f, b, a, options);
        r.value = -r.value;
        return r;
    }
    const std::array<double, 2> bp{a, b};
    return integrate(f, bp, options);
}

Result integrate_to_infinity(const Integrand& f, double a, const Options& options) {
    const Integrand mapped = [&f, a](double u) {
        if (u <= 0.0) return 0.0;
        const double x = a + (1.0 - u) / u;
        const double v = f(x);
        return v == 0.0 ? 0.0 : v / (u * u);
    };
    return integrate(mapped, 0.0, 1.0, options);
}

Result gamma_expectation(double alpha, double beta, const Integrand& f,
                         std::span<const double> extra_breakpoints, const Options& options) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw DomainError("gamma_expectation: alpha and beta must be positive");
    }
    const double log_norm = specfun::log_gamma(alpha);
    const auto pdf_std = [alpha, log_norm](double u) {
        if (u <= 0.0) return 0.0;
        return std::exp((alpha - 1.0) * std::log(u) - u - log_norm);
    };

    // Work in the standardized variable u = x / beta.
    const double sd = std::sqrt(alpha);
    const double mode = std::max(alpha - 1.0, 0.0);
    double upper = alpha + 1.0;
    // Gamma(alpha) right tail: grow the cut until Q(alpha, upper) < 1e-18.
    while (specfun::regularized_upper_gamma(alpha, upper) > 1e-18) upper += std::max(sd, 1.0);

    std::vector<double> bp;
    bp.push_back(0.0);
    bp.push_back(upper);
    for (double k : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        bp.push_back(mode + k * sd);
        bp.push_back(mode - k * sd);
    }
    for (double x : extra_breakpoints) bp.push_back(x / beta);

    // Coarse scan for the mode of f * pdf.
    {
        constexpr int kScan = 96;
        double best = -1.0;
        double where = mode;
        for (int i = 1; i < kScan; ++i) {
            const double u = upper * i / kScan;
            const double v = std::abs(f(beta * u) * pdf_std(u));
            if (v > best) {
                best = v;
                where = u;
            }
        }
        bp.push_back(where);
    }

    const double lower_cut = alpha < 1.0 ? 1.0 : 0.0;
    bp.push_back(lower_cut);
    std::erase_if(bp, [&](double u) { return !(u >= lower_cut && u <= upper) || !std::isfinite(u); });
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    const Integrand body = [&](double u) {
        const double p = pdf_std(u);
        return p == 0.0 ? 0.0 : f(beta * u) * p;
    };
    Result main = integrate(body, bp, options);

    if (alpha < 1.0) {
        // u = w^(1/alpha): u^(alpha-1) du = dw / alpha.
        const double inv_alpha = 1.0 / alpha;
        const double log_norm1 = specfun::log_gamma(alpha + 1.0);
        const Integrand head = [&](double w) {
            const double u = std::pow(w, inv_alpha);
            return f(beta * u) * std::exp(-u - log_norm1);
        };
        Result r = integrate(head, 0.0, 1.0, options);
        main.value += r.value;
        main.abs_error += r.abs_error;
        main.evaluations += r.evaluations;
        main.converged = main.converged && r.converged;
    }
    return main;
}

}  // namespace moris::quad
