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

#ifndef MORIS_MCSIM_HPP
#define MORIS_MCSIM_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "moris/channel.hpp"
#include "moris/perf.hpp"
#include "moris/rng.hpp"

namespace moris::mcsim {

/// Zero-mean von Mises draw on [-pi, pi) (Best-Fisher rejection);
/// kappa == 0 gives a uniform angle.
[[nodiscard]] double sample_von_mises(double kappa, rng::Stream& stream);

/// Latent Gaussian correlation r for which two Gamma(m, 1/m) variables
/// coupled through a Gaussian copula reach power correlation `c_target`.
/// The copula map r -> corr is evaluated from a Hermite expansion of the
/// Gamma quantile transform (200-node Gauss-Hermite) and inverted by
/// bisection. Throws ConvergenceError if |achieved - target| > 1e-4.
[[nodiscard]] double calibrate_copula(double c_target, double m);

/// Power correlation produced by latent correlation r under the copula above.
[[nodiscard]] double copula_power_correlation(double r, double m);

/// Generator of unit-scale Nakagami-m amplitude vectors on an RIS whose
/// powers correlate as rho^(d / c0).
///
/// The power is written as u^2 = (sum_{k<n} x_k^2 + G) / (2m) with
/// n = floor(2m) correlated Gaussian vectors x_k of latent correlation
/// sqrt(C) and, when 2m is not an integer, a chi-square component G of
/// 2m - n degrees of freedom coupled through the calibrated Gaussian copula.
/// Each component reproduces the power correlation C, so the sum does too;
/// for integer 2m the construction also reproduces the amplitude
/// correlation of channel::amplitude_correlation exactly.
class CorrelatedNakagamiSampler {
public:
    CorrelatedNakagamiSampler(const channel::RisGeometry& geom, double rho, double m);

    [[nodiscard]] int size() const noexcept { return elements_; }
    [[nodiscard]] double shape() const noexcept { return m_; }

    /// Writes size() amplitudes into `out`.
    void sample(rng::Stream& stream, Eigen::Ref<Eigen::VectorXd> out) const;

private:
    double m_;
    int elements_;
    int gaussian_components_;
    double fractional_shape_;  ///< shape of the copula-coupled Gamma part, 0 if absent
    Eigen::MatrixXd gauss_factor_;
    Eigen::MatrixXd copula_factor_;
    bool independent_;
};

[[nodiscard]] Eigen::VectorXd sample_correlated_nakagami(const channel::RisGeometry& geom, double rho,
                                                         double m, rng::Stream& stream);

struct SimConfig {
    channel::RisGeometry geometry = channel::RisGeometry::near_square(16);
    double rho = 0.5;
    channel::FadingParams fading;
    perf::InterferenceProfile interference;
    bool interferer_correlated = true;
    double p = 1.0;  ///< linear transmit SNR
    std::int64_t frames = 10000;
    std::uint64_t seed = 0xC0FFEE;

    void validate() const;
};

struct FrameSample {
    double snr = 0.0;
    double aligned_gain = 0.0;
    std::complex<double> interference;
    double theta = 0.0;
};

/// Per-frame simulator of gamma = p |X e^{j theta} + Y|^2.
///
/// Frame f draws every quantity from rng::Stream(seed, f, substream) with a
/// fixed substream per component, so two configurations that differ only
/// in p, rho or kappa see common random numbers.
class LinkSimulator {
public:
    explicit LinkSimulator(SimConfig config);

    [[nodiscard]] const SimConfig& config() const noexcept { return config_; }
    [[nodiscard]] FrameSample simulate_frame(std::uint64_t frame) const;

private:
    struct InterfererChannel {
        std::shared_ptr<const CorrelatedNakagamiSampler> h;
        std::shared_ptr<const CorrelatedNakagamiSampler> g;
        int configurations = 1;  ///< phase configurations per frame
        double amplitude = 1.0;  ///< sqrt(1/c) in SubFrame mode
    };

    SimConfig config_;
    CorrelatedNakagamiSampler h0_;
    CorrelatedNakagamiSampler g0_;
    std::vector<InterfererChannel> interferers_;
};

/// Substream layout of a frame.
namespace substream {
inline constexpr std::uint32_t h0 = 0;
inline constexpr std::uint32_t g0 = 1;
inline constexpr std::uint32_t phase_error = 2;
[[nodiscard]] constexpr std::uint32_t interferer(std::size_t i, std::uint32_t part) noexcept {
    return 8u + 4u * static_cast<std::uint32_t>(i) + part;
}
}  // namespace substream

struct EstimatorResult {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

struct EstimateOptions {
    int workers = 0;              ///< 0 = hardware concurrency
    std::int64_t chunk = 4096;    ///< frames per reduction chunk
};

/// Mean and standard error of sample(i), i in [0, n). Work is split into
/// fixed chunks reduced in index order (compensated sum for the mean,
/// pairwise Welford merge for the variance), so the result is independent
/// of the worker count.
[[nodiscard]] EstimatorResult estimate_mean(std::int64_t n, const std::function<double(std::int64_t)>& sample,
                                            const EstimateOptions& options = {});

/// Mean of statistic(frame sample) over config.frames frames.
[[nodiscard]] EstimatorResult estimate_statistic(const LinkSimulator& sim,
                                                 const std::function<double(const FrameSample&)>& statistic,
                                                 const EstimateOptions& options = {});

/// Mean of log2(1 + gamma).
[[nodiscard]] EstimatorResult estimate_spectral_efficiency(const SimConfig& config,
                                                           const EstimateOptions& options = {});

/// Mean of log2(1 + gamma_a) - log2(1 + gamma_b) with both configurations
/// driven by the same frame streams (seed taken from `a`).
[[nodiscard]] EstimatorResult estimate_paired_difference(const SimConfig& a, const SimConfig& b,
                                                         const EstimateOptions& options = {});

/// The config.frames SNR realizations in frame order.
[[nodiscard]] std::vector<double> simulate_snr(const SimConfig& config, const EstimateOptions& options = {});

/// Fraction of simulated SNR values <= each grid point.
[[nodiscard]] std::vector<double> empirical_cdf(const SimConfig& config, std::span<const double> grid,
                                                const EstimateOptions& options = {});

}  // namespace moris::mcsim

#endif  // MORIS_MCSIM_HPP
