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

#ifndef MORIS_PERF_HPP
#define MORIS_PERF_HPP

#include <optional>
#include <vector>

#include "moris/channel.hpp"

namespace moris::perf {

enum class IoiMode { UniformFraction, SubFrame };

struct Interferer {
    int m_elements = 1;
    std::optional<int> subframe_factor;  ///< c_i >= 2, SubFrame mode only
};

struct InterferenceProfile {
    std::vector<Interferer> interferers;
    IoiMode mode = IoiMode::UniformFraction;

    /// Throws ConfigError when an interferer breaks its invariant.
    void validate() const;
};

/// Half-variance of the interference term: sum M_i / 4 (UniformFraction) or
/// sum M_i (c_i - 1) / (2 c_i) (SubFrame).
[[nodiscard]] double sigma_squared(const InterferenceProfile& profile);

[[nodiscard]] double db_to_linear(double db);
[[nodiscard]] double linear_to_db(double linear);

struct SnrModel {
    double p = 1.0;  ///< linear transmit SNR
    channel::GammaFit gamma_fit;
    double sigma2 = 0.0;

    void validate() const;

    [[nodiscard]] static SnrModel from_db(double p_db, const channel::GammaFit& fit, double sigma2);
};

struct CapacityBounds {
    double lower = 0.0;
    double upper = 0.0;
};

enum class CdfPath {
    MarcumMixture,   ///< Gamma-weighted Marcum Q integral (sigma2 > 0)
    NoInterference,  ///< Gamma CDF of the aligned gain (sigma2 == 0)
};

struct CdfEvaluation {
    double probability = 0.0;
    double abs_error = 0.0;
    CdfPath path = CdfPath::MarcumMixture;
};

/// P(gamma_snr <= gamma) with the aligned gain ~ Gamma(alpha, beta) and the
/// interference circularly Gaussian with per-component variance sigma2.
[[nodiscard]] CdfEvaluation snr_cdf_detailed(double gamma, const SnrModel& model);
[[nodiscard]] double snr_cdf(double gamma, const SnrModel& model);
[[nodiscard]] double outage_probability(double gamma_th, const SnrModel& model);

/// log2(1 + p [alpha (alpha + 1) beta^2 + 2 sigma2]).
[[nodiscard]] double capacity_upper(const SnrModel& model);

enum class LogGainMethod { Quadrature, ClosedForm };

/// E[ln |X + Y|^2]. Quadrature integrates ln x^2 + E1(x^2 / (2 sigma2))
/// against the Gamma density; ClosedForm uses the Meijer-G expression.
[[nodiscard]] double expected_log_gain(const SnrModel& model,
                                       LogGainMethod method = LogGainMethod::Quadrature);

/// log2(1 + p exp(E[ln |X + Y|^2])).
[[nodiscard]] double capacity_lower(const SnrModel& model,
                                    LogGainMethod method = LogGainMethod::Quadrature);

[[nodiscard]] CapacityBounds capacity_bounds(const SnrModel& model);

/// p [M0 (1 - theta_bar^2) + Tr[R_h R_g] theta_bar^2], p linear.
[[nodiscard]] double asymptotic_snr(int M0, double theta_bar, double trace_product, double p);

/// Same expression with the transmit SNR given in dB.
[[nodiscard]] double asymptotic_snr_db(int M0, double theta_bar, double trace_product, double p_db);

}  // namespace moris::perf

#endif  // MORIS_PERF_HPP
