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

#ifndef MORIS_CHANNEL_HPP
#define MORIS_CHANNEL_HPP

#include <Eigen/Core>
#include <variant>

namespace moris::channel {

/// Rectangular RIS layout. Element i (1-based) sits at
/// [0, l * ((i-1) mod m_h), k * floor((i-1) / m_h) + l0].
struct RisGeometry {
    int m_h = 1;                  ///< elements per row
    int m_v = 1;                  ///< elements per column
    double elem_width_l = 1.0;    ///< horizontal pitch
    double elem_height_k = 1.0;   ///< vertical pitch
    double base_height_l0 = 0.0;  ///< height of the first row
    double min_spacing_c0 = 1.0;  ///< distance unit of the correlation decay

    [[nodiscard]] int elements() const noexcept { return m_h * m_v; }

    /// Throws ConfigError when a field breaks its invariant.
    void validate() const;

    /// Unit-pitch layout of `elements` using the most nearly square
    /// factorization m_h x m_v (16 -> 4 x 4, 12 -> 4 x 3, primes -> p x 1).
    [[nodiscard]] static RisGeometry near_square(int elements);
};

struct PerfectCsi {};
struct VonMises {
    double kappa = 0.0;
};
using PhaseError = std::variant<PerfectCsi, VonMises>;

struct FadingParams {
    double m_h_shape = 1.0;
    double m_g_shape = 1.0;
    PhaseError phase_error = PerfectCsi{};

    void validate() const;
};

struct CorrelationMatrix {
    Eigen::MatrixXd entries;
    double rho = 0.0;
};

struct AmplitudeCorrelation {
    Eigen::MatrixXd entries;
};

struct GammaFit {
    double alpha = 1.0;
    double beta = 1.0;
};

struct MomentSummary {
    double mean_x = 0.0;
    double second_moment_x = 0.0;
    double var_x = 0.0;
    double trace_product = 0.0;
    double theta_bar = 1.0;
    int elements = 0;
};

/// Position of element i in [1, M]. Throws DomainError when out of range.
[[nodiscard]] Eigen::Vector3d element_position(int i, const RisGeometry& geom);

/// Power correlations rho^(|c_i - c_j| / c0) with a unit diagonal.
[[nodiscard]] CorrelationMatrix correlation_matrix(const RisGeometry& geom, double rho);

/// E[u u^T] for unit-scale Nakagami-m amplitudes whose powers correlate as `c`:
/// Gamma(m+1/2)^2 / (Gamma(m)^2 m) * 2F1(-1/2, -1/2; m; c_ij), with the
/// hypergeometric factor evaluated once per distinct correlation value.
[[nodiscard]] AmplitudeCorrelation amplitude_correlation(const CorrelationMatrix& c, double m);

/// Mean resultant length of the phase error: 1, or I1(kappa)/I0(kappa).
[[nodiscard]] double theta_bar(const PhaseError& phase_error);

/// E[u] for a unit-scale Nakagami-m amplitude.
[[nodiscard]] double nakagami_mean(double m);

[[nodiscard]] double mean_x(int M0, const FadingParams& params);

/// Tr[R_h R_g]. Throws DomainError on mismatched dimensions.
[[nodiscard]] double trace_product(const AmplitudeCorrelation& r_h, const AmplitudeCorrelation& r_g);

[[nodiscard]] double second_moment_x(int M0, double theta_bar, double trace_product);

/// second_moment - mean^2; throws DegenerateError unless strictly positive.
[[nodiscard]] double var_x(double mean, double second_moment);

/// Moment-matched Gamma(alpha, beta); throws DegenerateError for var <= 0
/// and DomainError for mean <= 0.
[[nodiscard]] GammaFit gamma_fit(double mean, double var);
[[nodiscard]] GammaFit gamma_fit(const MomentSummary& summary);

/// Full moment chain for hops with separate geometry and correlation.
[[nodiscard]] MomentSummary summarize(const RisGeometry& geom_h, double rho_h,
                                      const RisGeometry& geom_g, double rho_g,
                                      const FadingParams& params);

/// Both hops share `geom` and `rho`.
[[nodiscard]] MomentSummary summarize(const RisGeometry& geom, double rho, const FadingParams& params);

}  // namespace moris::channel

#endif  // MORIS_CHANNEL_HPP
