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

#include <cmath>
#include <numbers>
#include <random>

#include "moris/channel.hpp"
#include "moris/error.hpp"
#include "oracles.hpp"

namespace ch = moris::channel;

namespace {

constexpr double kPi = std::numbers::pi;

ch::RisGeometry grid(int m_h, int m_v) {
    ch::RisGeometry g;
    g.m_h = m_h;
    g.m_v = m_v;
    g.elem_width_l = 0.5;
    g.elem_height_k = 0.75;
    g.base_height_l0 = 2.0;
    g.min_spacing_c0 = 0.5;
    return g;
}

ch::FadingParams fading(double m, std::optional<double> kappa) {
    ch::FadingParams f;
    f.m_h_shape = m;
    f.m_g_shape = m;
    if (kappa) f.phase_error = ch::VonMises{*kappa};
    return f;
}

}  // namespace

TEST(Geometry, ValidationAndNearSquare) {
    EXPECT_NO_THROW(grid(4, 4).validate());
    auto bad = grid(0, 3);
    EXPECT_THROW(bad.validate(), moris::ConfigError);
    bad = grid(2, 2);
    bad.min_spacing_c0 = 0.0;
    EXPECT_THROW(bad.validate(), moris::ConfigError);
    bad = grid(2, 2);
    bad.elem_width_l = -1.0;
    EXPECT_THROW(bad.validate(), moris::ConfigError);

    const auto sq = ch::RisGeometry::near_square(16);
    EXPECT_EQ(sq.m_h, 4);
    EXPECT_EQ(sq.m_v, 4);
    const auto r = ch::RisGeometry::near_square(10);
    EXPECT_EQ(r.elements(), 10);
    EXPECT_EQ(r.m_v, 2);
    EXPECT_EQ(ch::RisGeometry::near_square(7).elements(), 7);
    EXPECT_THROW((void)ch::RisGeometry::near_square(0), moris::ConfigError);
}

TEST(ElementPosition, Examples) {
    const auto g = grid(3, 2);
    EXPECT_EQ(ch::element_position(1, g), Eigen::Vector3d(0.0, 0.0, 2.0));
    EXPECT_EQ(ch::element_position(2, g), Eigen::Vector3d(0.0, 0.5, 2.0));
    EXPECT_EQ(ch::element_position(4, g), Eigen::Vector3d(0.0, 0.0, 2.75));
    EXPECT_EQ(ch::element_position(6, g), Eigen::Vector3d(0.0, 1.0, 2.75));
    EXPECT_THROW((void)ch::element_position(0, g), moris::DomainError);
    EXPECT_THROW((void)ch::element_position(7, g), moris::DomainError);
}

TEST(CorrelationMatrix, ExtremesAndAdjacentPair) {
    const auto g = grid(4, 3);
    const auto c0 = ch::correlation_matrix(g, 0.0);
    EXPECT_TRUE(c0.entries.isApprox(Eigen::MatrixXd::Identity(12, 12)));
    EXPECT_EQ((c0.entries - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff(), 0.0);
    const auto c1 = ch::correlation_matrix(g, 1.0);
    EXPECT_EQ((c1.entries - Eigen::MatrixXd::Ones(12, 12)).cwiseAbs().maxCoeff(), 0.0);
    const auto c = ch::correlation_matrix(g, 0.5);
    EXPECT_DOUBLE_EQ(c.entries(0, 1), std::pow(0.5, 0.5 / 0.5));
    EXPECT_DOUBLE_EQ(c.entries(0, 4), std::pow(0.5, 0.75 / 0.5));
    EXPECT_DOUBLE_EQ(c.entries(0, 5), std::pow(0.5, std::hypot(0.5, 0.75) / 0.5));
    EXPECT_THROW((void)ch::correlation_matrix(g, -0.1), moris::DomainError);
    EXPECT_THROW((void)ch::correlation_matrix(g, 1.1), moris::DomainError);
}

TEST(CorrelationMatrix, Invariants) {
    for (double rho : {0.1, 0.5, 0.9}) {
        const auto g = grid(5, 4);
        const auto c = ch::correlation_matrix(g, rho);
        EXPECT_EQ(c.rho, rho);
        const int M = g.elements();
        for (int i = 0; i < M; ++i) {
            EXPECT_EQ(c.entries(i, i), 1.0);
            for (int j = 0; j < M; ++j) {
                EXPECT_EQ(c.entries(i, j), c.entries(j, i));
                EXPECT_GE(c.entries(i, j), 0.0);
                EXPECT_LE(c.entries(i, j), 1.0);
                for (int k = 0; k < M; ++k) {
                    const double dj = (ch::element_position(i + 1, g) - ch::element_position(j + 1, g)).norm();
                    const double dk = (ch::element_position(i + 1, g) - ch::element_position(k + 1, g)).norm();
                    if (dj < dk) EXPECT_GE(c.entries(i, j), c.entries(i, k));
                }
            }
        }
    }
}

TEST(AmplitudeCorrelation, Examples) {
    const auto g = grid(3, 3);
    for (double m : {0.5, 1.0, 2.5, 6.0}) {
        const auto r = ch::amplitude_correlation(ch::correlation_matrix(g, 0.0), m);
        const double off = std::exp(2.0 * (std::lgamma(m + 0.5) - std::lgamma(m))) / m;
        for (int i = 0; i < 9; ++i) {
            EXPECT_NEAR(r.entries(i, i), 1.0, 1e-15);
            // The Gauss sum on the diagonal cancels the prefactor.
            EXPECT_NEAR(off * oracle::hyp2f1_half(m, 1.0), 1.0, 1e-10);
            for (int j = 0; j < 9; ++j) {
                if (i != j) EXPECT_NEAR(r.entries(i, j), off, 1e-14);
            }
        }
    }
    const auto r1 = ch::amplitude_correlation(ch::correlation_matrix(g, 0.0), 1.0);
    EXPECT_NEAR(r1.entries(0, 1), kPi / 4.0, 1e-7);
    EXPECT_THROW((void)ch::amplitude_correlation(ch::correlation_matrix(g, 0.5), 0.4), moris::ConfigError);
}

TEST(AmplitudeCorrelation, EntriesMatchOracleAndIncreaseWithC) {
    const auto g = grid(4, 4);
    for (double m : {1.0, 2.5}) {
        const auto c = ch::correlation_matrix(g, 0.6);
        const auto r = ch::amplitude_correlation(c, m);
        const double pref = std::exp(2.0 * (std::lgamma(m + 0.5) - std::lgamma(m))) / m;
        for (int i = 0; i < 16; ++i) {
            for (int j = 0; j < 16; ++j) {
                EXPECT_EQ(r.entries(i, j), r.entries(j, i));
                EXPECT_GT(r.entries(i, j), 0.0);
                EXPECT_LE(r.entries(i, j), 1.0);
                if (i != j) EXPECT_NEAR(r.entries(i, j), pref * oracle::hyp2f1_half(m, c.entries(i, j)), 1e-10);
            }
        }
        double prev = 0.0;
        for (int k = 0; k <= 50; ++k) {
            ch::CorrelationMatrix two;
            two.entries = Eigen::MatrixXd::Identity(2, 2);
            two.entries(0, 1) = two.entries(1, 0) = k / 50.0;
            const double v = ch::amplitude_correlation(two, m).entries(0, 1);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(ThetaBar, Examples) {
    EXPECT_EQ(ch::theta_bar(ch::VonMises{0.0}), 0.0);
    EXPECT_EQ(ch::theta_bar(ch::PerfectCsi{}), 1.0);
    EXPECT_NEAR(ch::theta_bar(ch::VonMises{8.0}), oracle::bessel_i_series(1, 8.0) / oracle::bessel_i_series(0, 8.0), 1e-13);
    EXPECT_NEAR(ch::theta_bar(ch::VonMises{8.0}), 0.935, 5e-4);
}

TEST(MeanX, Examples) {
    EXPECT_NEAR(ch::mean_x(4, fading(1.0, std::nullopt)), kPi, 1e-13);
    EXPECT_EQ(ch::mean_x(9, fading(2.0, 0.0)), 0.0);
    const double one = ch::mean_x(1, fading(1.7, 3.0));
    for (int M0 : {2, 16, 100}) EXPECT_NEAR(ch::mean_x(M0, fading(1.7, 3.0)), M0 * one, 1e-12 * M0);
    EXPECT_THROW((void)ch::mean_x(0, fading(1.0, std::nullopt)), moris::DomainError);
    auto bad = fading(1.0, -1.0);
    EXPECT_THROW((void)ch::mean_x(4, bad), moris::ConfigError);
}

TEST(TraceProduct, Examples) {
    const auto g = grid(2, 2);
    ch::AmplitudeCorrelation id{Eigen::MatrixXd::Identity(4, 4)};
    EXPECT_DOUBLE_EQ(ch::trace_product(id, id), 4.0);
    const auto r = ch::amplitude_correlation(ch::correlation_matrix(g, 0.0), 1.0);
    EXPECT_NEAR(ch::trace_product(r, r), 4.0 + 12.0 * kPi * kPi / 16.0, 1e-9);

    const auto a = ch::amplitude_correlation(ch::correlation_matrix(grid(3, 3), 0.3), 1.0);
    const auto b = ch::amplitude_correlation(ch::correlation_matrix(grid(3, 3), 0.8), 2.5);
    EXPECT_DOUBLE_EQ(ch::trace_product(a, b), ch::trace_product(b, a));
    EXPECT_NEAR(ch::trace_product(a, b), (a.entries * b.entries).trace(), 1e-12);
    EXPECT_THROW((void)ch::trace_product(a, id), moris::DomainError);
}

TEST(SecondMoment, Examples) {
    EXPECT_DOUBLE_EQ(ch::second_moment_x(7, 0.0, 30.0), 7.0);
    EXPECT_DOUBLE_EQ(ch::second_moment_x(7, 1.0, 30.0), 30.0);
    EXPECT_NEAR(ch::second_moment_x(4, 1.0, 4.0 + 12.0 * kPi * kPi / 16.0), 11.4022, 1e-4);
    EXPECT_THROW((void)ch::second_moment_x(4, 1.5, 4.0), moris::DomainError);
}

TEST(GammaFit, Examples) {
    const auto f = ch::gamma_fit(2.0, 1.0);
    EXPECT_DOUBLE_EQ(f.alpha, 4.0);
    EXPECT_DOUBLE_EQ(f.beta, 0.5);
    auto g = std::mt19937_64(11);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    for (int i = 0; i < 100; ++i) {
        const double mean = u(g), var = u(g);
        const auto fit = ch::gamma_fit(mean, var);
        EXPECT_NEAR(fit.alpha * fit.beta, mean, 1e-12 * mean);
        EXPECT_NEAR(fit.alpha * fit.beta * fit.beta, var, 1e-12 * var);
    }
    EXPECT_THROW((void)ch::gamma_fit(1.0, 0.0), moris::DegenerateError);
    EXPECT_THROW((void)ch::var_x(2.0, 4.0), moris::DegenerateError);
    EXPECT_THROW((void)ch::var_x(2.0, 3.0), moris::DegenerateError);
    EXPECT_DOUBLE_EQ(ch::var_x(2.0, 5.0), 1.0);
}

TEST(Summary, PerfectCsiAndConsistency) {
    const auto s = ch::summarize(grid(2, 2), 0.5, fading(1.0, std::nullopt));
    EXPECT_EQ(s.theta_bar, 1.0);
    EXPECT_EQ(s.elements, 4);
    EXPECT_NEAR(s.var_x, s.second_moment_x - s.mean_x * s.mean_x, 1e-12);
    EXPECT_GT(s.var_x, 0.0);
    EXPECT_GT(s.trace_product, 0.0);
    EXPECT_THROW((void)ch::summarize(grid(2, 2), 0.5, grid(3, 1), 0.5, fading(1.0, std::nullopt)), moris::ConfigError);
}

TEST(Summary, PerHopParametersAreUsed) {
    const auto f = fading(1.0, 8.0);
    const auto shared = ch::summarize(grid(3, 3), 0.5, f);
    const auto split = ch::summarize(grid(3, 3), 0.5, grid(3, 3), 0.0, f);
    EXPECT_LT(split.trace_product, shared.trace_product);
    EXPECT_EQ(split.mean_x, shared.mean_x);
}

TEST(Summary, CauchySchwarzOnRandomGrid) {
    std::mt19937_64 g(21);
    std::uniform_int_distribution<int> side(1, 6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const int a = side(g), b = side(g);
        if (a * b < 2) continue;
        auto f = fading(0.5 + 5.0 * u(g), 20.0 * u(g));
        f.m_g_shape = 0.5 + 5.0 * u(g);
        const auto s = ch::summarize(grid(a, b), u(g), f);
        EXPECT_LE(s.mean_x * s.mean_x, s.second_moment_x);
    }
}

TEST(GammaFit, FittedDensityReproducesMoments) {
    for (const auto& [m, kappa, side] : {std::tuple{1.0, 8.0, 2}, std::tuple{2.5, 1.0, 4}, std::tuple{0.5, 20.0, 10}}) {
        const auto s = ch::summarize(grid(side, side), 0.5, fading(m, kappa));
        const auto fit = ch::gamma_fit(s);
        const double mass = oracle::gamma_expectation(fit.alpha, fit.beta, [](double) { return 1.0; });
        const double m1 = oracle::gamma_expectation(fit.alpha, fit.beta, [](double x) { return x; });
        const double m2 = oracle::gamma_expectation(fit.alpha, fit.beta, [](double x) { return x * x; });
        EXPECT_NEAR(mass, 1.0, 1e-9);
        EXPECT_NEAR(m1 / s.mean_x, 1.0, 1e-9);
        EXPECT_NEAR(m2 / s.second_moment_x, 1.0, 1e-9);
    }
}
