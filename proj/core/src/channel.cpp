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

#include "moris/channel.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "moris/error.hpp"
#include "moris/specfun.hpp"

namespace moris::channel {
namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_shape(double m, const char* name) {
    if (!(m >= 0.5) || !std::isfinite(m)) {
        throw ConfigError(std::string(name) + " must be a Nakagami shape >= 0.5, got " + num(m));
    }
}

// Prefactor Gamma(m+1/2)^2 / (Gamma(m)^2 m) = nakagami_mean(m)^2.
double amplitude_prefactor(double m) {
    const double e = nakagami_mean(m);
    return e * e;
}

}  // namespace

void RisGeometry::validate() const {
    if (m_h < 1 || m_v < 1) {
        throw ConfigError("RisGeometry: m_h and m_v must be >= 1, got " + std::to_string(m_h) + " x " +
                          std::to_string(m_v));
    }
    if (!(elem_width_l >= 0.0) || !(elem_height_k >= 0.0) || !(base_height_l0 >= 0.0)) {
        throw ConfigError("RisGeometry: lengths must be >= 0");
    }
    if (!(min_spacing_c0 > 0.0)) throw ConfigError("RisGeometry: min_spacing_c0 must be > 0");
}

RisGeometry RisGeometry::near_square(int elements) {
    if (elements < 1) throw ConfigError("RisGeometry: element count must be >= 1");
    int rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(elements))));
    while (elements % rows != 0) --rows;
    RisGeometry g;
    g.m_h = elements / rows;
    g.m_v = rows;
    return g;
}

void FadingParams::validate() const {
    check_shape(m_h_shape, "m_h_shape");
    check_shape(m_g_shape, "m_g_shape");
    if (const auto* vm = std::get_if<VonMises>(&phase_error)) {
        if (!(vm->kappa >= 0.0) || !std::isfinite(vm->kappa)) {
            throw ConfigError("kappa must be finite and >= 0, got " + num(vm->kappa));
        }
    }
}

Eigen::Vector3d element_position(int i, const RisGeometry& geom) {
    geom.validate();
    if (i < 1 || i > geom.elements()) {
        throw DomainError("element_position: index " + std::to_string(i) + " outside [1, " +
                          std::to_string(geom.elements()) + "]");
    }
    const int y = (i - 1) % geom.m_h;
    const int z = (i - 1) / geom.m_h;
    return {0.0, geom.elem_width_l * y, geom.elem_height_k * z + geom.base_height_l0};
}

CorrelationMatrix correlation_matrix(const RisGeometry& geom, double rho) {
    geom.validate();
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("correlation_matrix: rho must lie in [0, 1]");
    const int M = geom.elements();
    CorrelationMatrix out;
    out.rho = rho;
    out.entries.resize(M, M);
    std::vector<Eigen::Vector3d> pos;
    pos.reserve(static_cast<std::size_t>(M));
    for (int i = 1; i <= M; ++i) pos.push_back(element_position(i, geom));
    for (int i = 0; i < M; ++i) {
        out.entries(i, i) = 1.0;
        for (int j = i + 1; j < M; ++j) {
            const double d = (pos[static_cast<std::size_t>(i)] - pos[static_cast<std::size_t>(j)]).norm();
            const double v = d == 0.0 ? 1.0 : std::pow(rho, d / geom.min_spacing_c0);
            out.entries(i, j) = v;
            out.entries(j, i) = v;
        }
    }
    return out;
}

AmplitudeCorrelation amplitude_correlation(const CorrelationMatrix& c, double m) {
    check_shape(m, "amplitude_correlation: m");
    const double pref = amplitude_prefactor(m);
    std::map<double, double> cache;
    const auto entry = [&](double cij) {
        auto it = cache.find(cij);
        if (it != cache.end()) return it->second;
        const double v = pref * specfun::hyp2f1_half(m, cij);
        cache.emplace(cij, v);
        return v;
    };
    const Eigen::Index M = c.entries.rows();
    AmplitudeCorrelation out;
    out.entries.resize(M, M);
    for (Eigen::Index i = 0; i < M; ++i) {
        out.entries(i, i) = 1.0;  // Gauss summation cancels the prefactor exactly
        for (Eigen::Index j = i + 1; j < M; ++j) {
            const double v = entry(c.entries(i, j));
            out.entries(i, j) = v;
            out.entries(j, i) = v;
        }
    }
    return out;
}

double theta_bar(const PhaseError& phase_error) {
    if (const auto* vm = std::get_if<VonMises>(&phase_error)) {
        return specfun::bessel_ratio_i1_i0(vm->kappa);
    }
    return 1.0;
}

double nakagami_mean(double m) {
    return std::exp(std::lgamma(m + 0.5) - std::lgamma(m)) / std::sqrt(m);
}

double mean_x(int M0, const FadingParams& params) {
    if (M0 < 1) throw DomainError("mean_x: M0 must be >= 1");
    params.validate();
    return nakagami_mean(params.m_h_shape) * nakagami_mean(params.m_g_shape) * M0 *
           theta_bar(params.phase_error);
}

double trace_product(const AmplitudeCorrelation& r_h, const AmplitudeCorrelation& r_g) {
    if (r_h.entries.rows() != r_g.entries.rows() || r_h.entries.cols() != r_g.entries.cols() ||
        r_h.entries.rows() != r_h.entries.cols()) {
        throw DomainError("trace_product: dimension mismatch");
    }
    // sum_{i,k} A_ik B_ki
    return (r_h.entries.array() * r_g.entries.transpose().array()).sum();
}

double second_moment_x(int M0, double theta_bar, double trace_product) {
    if (!(theta_bar >= 0.0 && theta_bar <= 1.0)) {
        throw DomainError("second_moment_x: theta_bar must lie in [0, 1]");
    }
    const double t2 = theta_bar * theta_bar;
    return M0 * (1.0 - t2) + trace_product * t2;
}

double var_x(double mean, double second_moment) {
    const double v = second_moment - mean * mean;
    if (!(v > 0.0)) {
        throw DegenerateError("var_x: E[X^2] - E[X]^2 = " + num(v) + " is not positive");
    }
    return v;
}

GammaFit gamma_fit(double mean, double var) {
    if (!(var > 0.0)) throw DegenerateError("gamma_fit: variance must be > 0, got " + num(var));
    if (!(mean > 0.0)) throw DomainError("gamma_fit: mean must be > 0, got " + num(mean));
    return {mean * mean / var, var / mean};
}

GammaFit gamma_fit(const MomentSummary& summary) { return gamma_fit(summary.mean_x, summary.var_x); }

MomentSummary summarize(const RisGeometry& geom_h, double rho_h, const RisGeometry& geom_g,
                        double rho_g, const FadingParams& params) {
    params.validate();
    if (geom_h.elements() != geom_g.elements()) {
        throw ConfigError("summarize: both hops need the same element count");
    }
    MomentSummary s;
    s.elements = geom_h.elements();
    s.theta_bar = theta_bar(params.phase_error);
    s.mean_x = mean_x(s.elements, params);
    const auto r_h = amplitude_correlation(correlation_matrix(geom_h, rho_h), params.m_h_shape);
    const auto r_g = amplitude_correlation(correlation_matrix(geom_g, rho_g), params.m_g_shape);
    s.trace_product = trace_product(r_h, r_g);
    s.second_moment_x = second_moment_x(s.elements, s.theta_bar, s.trace_product);
    s.var_x = var_x(s.mean_x, s.second_moment_x);
    return s;
}

MomentSummary summarize(const RisGeometry& geom, double rho, const FadingParams& params) {
    return summarize(geom, rho, geom, rho, params);
}

}  // namespace moris::channel
