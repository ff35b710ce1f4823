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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "moris/channel.hpp"
#include "moris/error.hpp"
#include "moris/mcsim.hpp"
#include "moris/perf.hpp"
#include "moris/rng.hpp"

namespace ch = moris::channel;
namespace mc = moris::mcsim;
namespace pf = moris::perf;

namespace {

constexpr double kPi = std::numbers::pi;

mc::SimConfig link(int M0, double m, std::optional<double> kappa, std::vector<int> interferers, double p_db = 10.0) {
    mc::SimConfig c;
    c.geometry = ch::RisGeometry::near_square(M0);
    c.rho = 0.5;
    c.fading.m_h_shape = m;
    c.fading.m_g_shape = m;
    if (kappa) c.fading.phase_error = ch::VonMises{*kappa};
    for (int Mi : interferers) c.interference.interferers.push_back({Mi, std::nullopt});
    c.p = pf::db_to_linear(p_db);
    return c;
}

struct Moments {
    double mean = 0.0, var = 0.0;
};

// Sample mean and variance of f(i) over i in [0, n).
template <class F>
Moments moments(std::int64_t n, F f) {
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = f(i);
        const double d = x - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (x - mean);
    }
    return {mean, m2 / static_cast<double>(n - 1)};
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    return d;
}

}  // namespace

TEST(VonMises, ZeroConcentrationIsUniform) {
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i) {
        moris::rng::Stream s(5, static_cast<std::uint64_t>(i), 0);
        const double a = mc::sample_von_mises(0.0, s);
        ASSERT_GE(a, -kPi);
        ASSERT_LT(a, kPi);
        xs.push_back(a);
    }
    EXPECT_LT(ks_distance(xs, [](double a) { return (a + kPi) / (2.0 * kPi); }), 0.01);
}

TEST(VonMises, CircularMoments) {
    for (double kappa : {0.5, 1.0, 8.0, 50.0}) {
        const std::int64_t n = 200000;
        moris::rng::Stream s(9, static_cast<std::uint64_t>(kappa * 100), 0);
        std::vector<double> draws(n);
        for (auto& d : draws) d = mc::sample_von_mises(kappa, s);
        const auto c = moments(n, [&](std::int64_t i) { return std::cos(draws[i]); });
        const auto sn = moments(n, [&](std::int64_t i) { return std::sin(draws[i]); });
        EXPECT_NEAR(c.mean, ch::theta_bar(ch::VonMises{kappa}), 3.0 * std::sqrt(c.var / n)) << "kappa = " << kappa;
        EXPECT_NEAR(sn.mean, 0.0, 3.0 * std::sqrt(sn.var / n));
    }
    moris::rng::Stream s(1, 1, 1);
    EXPECT_THROW((void)mc::sample_von_mises(-1.0, s), moris::DomainError);
}

TEST(Copula, EndpointsAndCalibrationAccuracy) {
    for (double m : {0.5, 0.8, 1.0, 1.7, 3.3}) {
        EXPECT_EQ(mc::calibrate_copula(0.0, m), 0.0);
        EXPECT_EQ(mc::calibrate_copula(1.0, m), 1.0);
        double prev = 0.0;
        for (double c = 0.05; c < 1.0; c += 0.05) {
            const double r = mc::calibrate_copula(c, m);
            EXPECT_NEAR(mc::copula_power_correlation(r, m), c, 1e-4);
            EXPECT_GT(r, prev);
            prev = r;
        }
    }
    EXPECT_THROW((void)mc::calibrate_copula(1.2, 1.0), moris::DomainError);
}

TEST(Copula, SampledPowerCorrelationMatchesTarget) {
    for (double m : {1.0, 1.7}) {
        const double r = mc::calibrate_copula(0.5, m);
        const int n = 1000000;
        std::vector<double> a(n), b(n);
        moris::rng::Stream s(77, static_cast<std::uint64_t>(m * 10), 0);
        const double rc = std::sqrt(1.0 - r * r);
        for (int i = 0; i < n; ++i) {
            const double z1 = s.normal();
            const double z2 = r * z1 + rc * s.normal();
            const auto to_power = [m](double z) {
                const double u = 0.5 * std::erfc(-z / std::sqrt(2.0));
                return boost::math::gamma_p_inv(m, u) / m;
            };
            a[i] = to_power(z1);
            b[i] = to_power(z2);
        }
        EXPECT_NEAR(correlation(a, b), 0.5, 0.005) << "m = " << m;
    }
}

TEST(Sampler, MarginalsAndCorrelations) {
    struct Case {
        int side;
        double rho, m;
    };
    for (const Case& cs : {Case{3, 0.5, 1.0}, Case{3, 0.8, 2.5}, Case{3, 0.2, 1.7}, Case{2, 0.5, 0.5}}) {
        ch::RisGeometry g = ch::RisGeometry::near_square(cs.side * cs.side);
        mc::CorrelatedNakagamiSampler sampler(g, cs.rho, cs.m);
        ASSERT_EQ(sampler.size(), g.elements());
        const int M = g.elements();
        const int n = 200000;
        Eigen::MatrixXd draws(M, n);
        for (int i = 0; i < n; ++i) {
            moris::rng::Stream s(3, static_cast<std::uint64_t>(i), 0);
            sampler.sample(s, draws.col(i));
        }
        const auto power_c = ch::correlation_matrix(g, cs.rho);
        const auto amp_r = ch::amplitude_correlation(power_c, cs.m);
        const Eigen::ArrayXXd pw = draws.array().square();
        for (int i = 0; i < M; ++i) {
            EXPECT_NEAR(pw.row(i).mean(), 1.0, 0.01);
            for (int j = i + 1; j < M; ++j) {
                const double euu = (draws.row(i).array() * draws.row(j).array()).mean();
                EXPECT_NEAR(euu, amp_r.entries(i, j), 0.01) << "m = " << cs.m << " pair " << i << "," << j;
                const Eigen::ArrayXd a = pw.row(i).transpose() - pw.row(i).mean();
                const Eigen::ArrayXd b = pw.row(j).transpose() - pw.row(j).mean();
                const double corr = (a * b).sum() / std::sqrt(a.square().sum() * b.square().sum());
                EXPECT_NEAR(corr, power_c.entries(i, j), 0.01);
            }
        }
    }
}

TEST(Sampler, UnitPowerAtMillionDraws) {
    mc::CorrelatedNakagamiSampler sampler(ch::RisGeometry::near_square(4), 0.5, 1.7);
    Eigen::VectorXd u(4);
    Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(4);
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        moris::rng::Stream s(8, static_cast<std::uint64_t>(i), 0);
        sampler.sample(s, u);
        sum += u.array().square();
    }
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(sum(i) / n, 1.0, 0.005);
}

TEST(Sampler, Validation) {
    EXPECT_THROW(mc::CorrelatedNakagamiSampler(ch::RisGeometry::near_square(4), 1.5, 1.0), moris::DomainError);
    EXPECT_THROW(mc::CorrelatedNakagamiSampler(ch::RisGeometry::near_square(4), 0.5, 0.3), moris::ConfigError);
}

TEST(Frame, NoInterferencePerfectCsi) {
    auto cfg = link(9, 1.3, std::nullopt, {}, 3.0);
    mc::LinkSimulator sim(cfg);
    for (std::uint64_t f = 0; f < 1000; ++f) {
        const auto s = sim.simulate_frame(f);
        EXPECT_EQ(s.theta, 0.0);
        EXPECT_EQ(s.interference, std::complex<double>(0.0, 0.0));
        EXPECT_DOUBLE_EQ(s.snr, cfg.p * s.aligned_gain * s.aligned_gain);
    }
}

TEST(Frame, SingleElementUnitGain) {
    auto cfg = link(1, 1.0, std::nullopt, {}, 0.0);
    cfg.frames = 400000;
    mc::LinkSimulator sim(cfg);
    const auto r = mc::estimate_statistic(sim, [](const mc::FrameSample& s) { return s.snr; });
    EXPECT_NEAR(r.mean, 1.0, 3.0 * r.std_error);
}

TEST(Frame, SnrIdentity) {
    auto cfg = link(16, 1.0, 8.0, {16, 4});
    mc::LinkSimulator sim(cfg);
    for (std::uint64_t f = 0; f < 500; ++f) {
        const auto s = sim.simulate_frame(f);
        const double expect = cfg.p * std::norm(s.aligned_gain * std::polar(1.0, s.theta) + s.interference);
        EXPECT_NEAR(s.snr, expect, 1e-12 * expect);
        EXPECT_GE(s.aligned_gain, 0.0);
    }
}

TEST(Frame, InterferenceVarianceAndMean) {
    for (int c : {0, 2, 4, 10}) {
        for (bool correlated : {true, false}) {
            auto cfg = link(4, 1.0, 8.0, {16});
            cfg.interferer_correlated = correlated;
            if (c > 0) {
                cfg.interference.mode = pf::IoiMode::SubFrame;
                cfg.interference.interferers[0].subframe_factor = c;
            }
            const std::int64_t n = 100000;
            mc::LinkSimulator sim(cfg);
            std::vector<mc::FrameSample> frames(n);
            for (std::int64_t i = 0; i < n; ++i) frames[i] = sim.simulate_frame(static_cast<std::uint64_t>(i));
            const auto stat = [&](auto f) {
                const auto m = moments(n, [&](std::int64_t i) { return f(frames[i]); });
                return mc::EstimatorResult{m.mean, std::sqrt(m.var / n), n};
            };
            const auto re = stat([](const mc::FrameSample& s) { return s.interference.real(); });
            const auto im = stat([](const mc::FrameSample& s) { return s.interference.imag(); });
            const auto pw = stat([](const mc::FrameSample& s) { return std::norm(s.interference); });
            const double target = c == 0 ? 16.0 / 2.0 : 16.0 * (c - 1.0) / c;
            EXPECT_NEAR(re.mean, 0.0, 3.0 * re.std_error);
            EXPECT_NEAR(im.mean, 0.0, 3.0 * im.std_error);
            EXPECT_NEAR(pw.mean / target, 1.0, 0.02) << "c = " << c << " correlated = " << correlated;
        }
    }
}

TEST(Frame, ChannelHardening) {
    double prev = INFINITY;
    for (int M0 : {16, 64, 256}) {
        auto cfg = link(M0, 1.0, 8.0, {});
        cfg.frames = 20000;
        const auto s = ch::summarize(cfg.geometry, cfg.rho, cfg.fading);
        mc::LinkSimulator sim(cfg);
        const auto mom = moments(cfg.frames, [&](std::int64_t i) {
            const double x = sim.simulate_frame(static_cast<std::uint64_t>(i)).aligned_gain;
            return x * x / s.second_moment_x;
        });
        EXPECT_LT(std::sqrt(mom.var), prev) << "M0 = " << M0;
        prev = std::sqrt(mom.var);
    }
}

TEST(Frame, AlignedGainMomentsMatchAnalyticFig4) {
    auto cfg = link(4, 1.0, 8.0, {});
    cfg.frames = 1000000;
    mc::LinkSimulator sim(cfg);
    const auto s = ch::summarize(cfg.geometry, cfg.rho, cfg.fading);
    const auto m1 = mc::estimate_statistic(sim, [](const mc::FrameSample& f) { return f.aligned_gain; });
    const auto m2 = mc::estimate_statistic(sim, [](const mc::FrameSample& f) { return f.aligned_gain * f.aligned_gain; });
    EXPECT_NEAR(m1.mean, s.mean_x, 3.0 * m1.std_error);
    EXPECT_NEAR(m2.mean, s.second_moment_x, 3.0 * m2.std_error);
    const auto fit = ch::gamma_fit(s);
    EXPECT_NEAR(fit.alpha * fit.beta, m1.mean, 3.0 * m1.std_error);
}

// Kolmogorov-Smirnov distance between the simulated aligned gain and its
// two-moment Gamma fit, Fig.-4 link without interference.
TEST(Frame, AlignedGainGammaFitKolmogorovSmirnov) {
    auto cfg = link(4, 1.0, 8.0, {});
    mc::LinkSimulator sim(cfg);
    const auto fit = ch::gamma_fit(ch::summarize(cfg.geometry, cfg.rho, cfg.fading));
    std::vector<double> xs(100000);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = sim.simulate_frame(i).aligned_gain;
    const double d = ks_distance(xs, [&](double x) { return boost::math::gamma_p(fit.alpha, x / fit.beta); });
    RecordProperty("ks_distance", std::to_string(d));
    EXPECT_LT(d, 0.03);
}

TEST(Estimator, ConstantStream) {
    const auto r = mc::estimate_mean(5000, [](std::int64_t) { return std::log2(1.0 + 7.0); });
    EXPECT_DOUBLE_EQ(r.mean, 3.0);
    EXPECT_EQ(r.std_error, 0.0);
    EXPECT_EQ(r.n, 5000);
}

TEST(Estimator, StandardErrorDefinition) {
    const auto f = [](std::int64_t i) { return static_cast<double>(i % 7) * 0.5 + (i % 3 == 0 ? 1e3 : 0.0); };
    const std::int64_t n = 10007;
    const auto r = mc::estimate_mean(n, f, {3, 1000});
    const auto mom = moments(n, f);
    EXPECT_NEAR(r.mean, mom.mean, 1e-12 * std::abs(mom.mean));
    EXPECT_NEAR(r.std_error, std::sqrt(mom.var / n), 1e-10 * r.std_error);
}

TEST(Estimator, DeterministicAcrossWorkerCounts) {
    auto cfg = link(16, 1.0, 8.0, {16});
    cfg.frames = 30000;
    const auto a = mc::estimate_spectral_efficiency(cfg, {1, 4096});
    const auto b = mc::estimate_spectral_efficiency(cfg, {4, 4096});
    const auto c = mc::estimate_spectral_efficiency(cfg, {1, 4096});
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.mean, c.mean);
    const auto sa = mc::simulate_snr(cfg, {1, 4096});
    const auto sb = mc::simulate_snr(cfg, {3, 4096});
    EXPECT_EQ(sa, sb);
    cfg.seed += 1;
    EXPECT_NE(mc::estimate_spectral_efficiency(cfg, {1, 4096}).mean, a.mean);
}

TEST(Estimator, Fig4WithinCapacityBounds) {
    for (double p_db : {0.0, 10.0, 20.0}) {
        auto cfg = link(4, 1.0, 8.0, {4}, p_db);
        cfg.frames = 100000;
        const auto r = mc::estimate_spectral_efficiency(cfg);
        const auto s = ch::summarize(cfg.geometry, cfg.rho, cfg.fading);
        const auto b = pf::capacity_bounds(pf::SnrModel::from_db(p_db, ch::gamma_fit(s), pf::sigma_squared(cfg.interference)));
        EXPECT_GE(r.mean, b.lower - 3.0 * r.std_error) << "p = " << p_db;
        EXPECT_LE(r.mean, b.upper + 3.0 * r.std_error) << "p = " << p_db;
    }
}

TEST(Estimator, EmpiricalCdfCountsSamples) {
    auto cfg = link(4, 1.0, 8.0, {4});
    cfg.frames = 5000;
    const std::vector<double> grid{0.5, 5.0, 50.0, 500.0};
    const auto cdf = mc::empirical_cdf(cfg, grid);
    const auto snr = mc::simulate_snr(cfg);
    ASSERT_EQ(cdf.size(), grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double count = static_cast<double>(std::count_if(snr.begin(), snr.end(), [&](double g) { return g <= grid[k]; }));
        EXPECT_DOUBLE_EQ(cdf[k], count / snr.size());
        if (k) EXPECT_GE(cdf[k], cdf[k - 1]);
    }
}

TEST(SimConfig, Validation) {
    auto cfg = link(4, 1.0, 8.0, {4});
    cfg.frames = 0;
    EXPECT_THROW(cfg.validate(), moris::ConfigError);
    cfg = link(4, 1.0, 8.0, {4});
    cfg.rho = -0.5;
    EXPECT_ANY_THROW(cfg.validate());
    cfg = link(4, 1.0, 8.0, {4});
    cfg.p = -1.0;
    EXPECT_ANY_THROW(cfg.validate());
}
