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

#include "moris/perf.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "moris/error.hpp"
#include "moris/quadrature.hpp"
#include "moris/specfun.hpp"

namespace moris::perf {
namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

quad::Options cdf_options() {
    quad::Options o;
    o.abs_tol = 1e-11;
    o.rel_tol = 1e-10;
    o.max_subdivisions = 8000;
    return o;
}

quad::Options log_gain_options() {
    quad::Options o;
    o.abs_tol = 1e-14;
    o.rel_tol = 1e-12;
    o.max_subdivisions = 8000;
    return o;
}

}  // namespace

void InterferenceProfile::validate() const {
    for (std::size_t i = 0; i < interferers.size(); ++i) {
        const Interferer& it = interferers[i];
        const std::string where = "interferer " + std::to_string(i + 1);
        if (it.m_elements < 1) throw ConfigError(where + ": m_elements must be >= 1");
        if (mode == IoiMode::SubFrame) {
            if (!it.subframe_factor) throw ConfigError(where + ": SubFrame mode requires subframe_factor");
            if (*it.subframe_factor < 2) throw ConfigError(where + ": subframe_factor must be >= 2");
        }
    }
}

double sigma_squared(const InterferenceProfile& profile) {
    profile.validate();
    double s = 0.0;
    for (const Interferer& it : profile.interferers) {
        if (profile.mode == IoiMode::UniformFraction) {
            s += it.m_elements / 4.0;
        } else {
            const double c = *it.subframe_factor;
            s += it.m_elements * (c - 1.0) / (2.0 * c);
        }
    }
    return s;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
    if (!(linear > 0.0)) throw DomainError("linear_to_db: argument must be > 0");
    return 10.0 * std::log10(linear);
}

void SnrModel::validate() const {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("SnrModel: p must be finite and > 0, got " + num(p));
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw DomainError("SnrModel: sigma2 must be finite and >= 0, got " + num(sigma2));
    }
    if (!(gamma_fit.alpha > 0.0) || !(gamma_fit.beta > 0.0)) {
        throw DomainError("SnrModel: Gamma fit parameters must be > 0");
    }
}

SnrModel SnrModel::from_db(double p_db, const channel::GammaFit& fit, double sigma2) {
    SnrModel m{db_to_linear(p_db), fit, sigma2};
    m.validate();
    return m;
}

CdfEvaluation snr_cdf_detailed(double gamma, const SnrModel& model) {
    model.validate();
    if (!(gamma >= 0.0)) throw DomainError("snr_cdf: gamma must be >= 0, got " + num(gamma));
    const double alpha = model.gamma_fit.alpha;
    const double beta = model.gamma_fit.beta;
    const double radius = std::sqrt(gamma / model.p);  // |X + Y| threshold

    if (model.sigma2 == 0.0) {
        return {specfun::regularized_lower_gamma(alpha, radius / beta), 0.0, CdfPath::NoInterference};
    }
    if (gamma == 0.0) return {0.0, 0.0, CdfPath::MarcumMixture};
    if (std::isinf(gamma)) return {1.0, 0.0, CdfPath::MarcumMixture};

    const double sigma = std::sqrt(model.sigma2);
    const double b = radius / sigma;
    const quad::Integrand tail = [sigma, b](double x) { return specfun::marcum_q1(x / sigma, b); };
    std::vector<double> extra;
    for (double k : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) extra.push_back(radius + k * sigma);
    const quad::Result r = quad::gamma_expectation(alpha, beta, tail, extra, cdf_options());
    if (!r.converged) {
        throw ConvergenceError("snr_cdf: quadrature error estimate " + num(r.abs_error) +
                               " above tolerance at gamma = " + num(gamma));
    }
    return {std::clamp(1.0 - r.value, 0.0, 1.0), r.abs_error, CdfPath::MarcumMixture};
}

double snr_cdf(double gamma, const SnrModel& model) { return snr_cdf_detailed(gamma, model).probability; }

double outage_probability(double gamma_th, const SnrModel& model) { return snr_cdf(gamma_th, model); }

double capacity_upper(const SnrModel& model) {
    model.validate();
    const double a = model.gamma_fit.alpha;
    const double b = model.gamma_fit.beta;
    return std::log2(1.0 + model.p * (a * (a + 1.0) * b * b + 2.0 * model.sigma2));
}

double expected_log_gain(const SnrModel& model, LogGainMethod method) {
    model.validate();
    const double alpha = model.gamma_fit.alpha;
    const double beta = model.gamma_fit.beta;
    const double base = 2.0 * (specfun::digamma(alpha) + std::log(beta));  // E[ln X^2]
    if (model.sigma2 == 0.0) return base;

    if (method == LogGainMethod::ClosedForm) {
        const double z = 2.0 * beta * beta / model.sigma2;
        const double log_scale = (alpha - 1.0) * std::numbers::ln2 - std::lgamma(alpha) -
                                 0.5 * std::log(std::numbers::pi);
        return base + specfun::meijer_g_2232_scaled(alpha, z, log_scale);
    }

    // ln x^2 + E1(t) = (E1(t) + ln t) + ln(2 sigma2) with t = x^2 / (2 sigma2),
    // which stays bounded as x -> 0.
    const double two_s2 = 2.0 * model.sigma2;
    const double log_two_s2 = std::log(two_s2);
    const quad::Integrand f = [two_s2, log_two_s2](double x) {
        if (x <= 0.0) return -specfun::euler_gamma + log_two_s2;
        return specfun::exp_integral_e1_plus_log(x * x / two_s2) + log_two_s2;
    };
    const double s = std::sqrt(two_s2);
    const std::array<double, 4> extra{0.1 * s, s, 3.0 * s, 10.0 * s};
    const quad::Result r = quad::gamma_expectation(alpha, beta, f, extra, log_gain_options());
    if (!r.converged) {
        throw ConvergenceError("expected_log_gain: quadrature error estimate " + num(r.abs_error) +
                               " above tolerance");
    }
    return r.value;
}

double capacity_lower(const SnrModel& model, LogGainMethod method) {
    return std::log2(1.0 + model.p * std::exp(expected_log_gain(model, method)));
}

CapacityBounds capacity_bounds(const SnrModel& model) {
    return {capacity_lower(model), capacity_upper(model)};
}

double asymptotic_snr(int M0, double theta_bar, double trace_product, double p) {
    if (M0 < 1) throw DomainError("asymptotic_snr: M0 must be >= 1");
    if (!(p >= 0.0)) throw DomainError("asymptotic_snr: p must be >= 0");
    return p * channel::second_moment_x(M0, theta_bar, trace_product);
}

double asymptotic_snr_db(int M0, double theta_bar, double trace_product, double p_db) {
    return asymptotic_snr(M0, theta_bar, trace_product, db_to_linear(p_db));
}

}  // namespace moris::perf
