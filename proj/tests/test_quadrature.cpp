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

#include <array>
#include <cmath>
#include <numbers>

#include "moris/quadrature.hpp"
#include "oracles.hpp"

namespace quad = moris::quad;

TEST(Quadrature, FiniteIntervals) {
    const auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 2.0, 1e-13);
    EXPECT_GT(r.evaluations, 0);
    // Integrable endpoint singularity.
    const auto s = quad::integrate([](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; }, 0.0, 1.0);
    EXPECT_NEAR(s.value, 2.0, 1e-9);
}

TEST(Quadrature, BreakpointsResolveKinks) {
    const std::array<double, 3> bp{-1.0, 0.3, 2.0};
    const auto r = quad::integrate([](double x) { return std::abs(x - 0.3); }, bp);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7, 1e-13);
}

TEST(Quadrature, SemiInfinite) {
    const auto r = quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 2.0);
    EXPECT_NEAR(r.value, std::exp(-2.0), 1e-13);
    const auto c = quad::integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0);
    EXPECT_NEAR(c.value, 0.5 * std::numbers::pi, 1e-9);
}

TEST(Quadrature, GammaExpectationMatchesOracle) {
    for (double alpha : {0.5, 0.9, 1.0, 3.7, 40.0, 500.0}) {
        for (double beta : {0.01, 1.0, 30.0}) {
            const auto mass = quad::gamma_expectation(alpha, beta, [](double) { return 1.0; });
            EXPECT_NEAR(mass.value, 1.0, 1e-10) << alpha << " " << beta;
            const auto mean = quad::gamma_expectation(alpha, beta, [](double x) { return x; });
            EXPECT_NEAR(mean.value / (alpha * beta), 1.0, 1e-10);
            const auto f = [beta](double x) { return std::cos(x / beta) / (1.0 + x / beta); };
            const double got = quad::gamma_expectation(alpha, beta, f).value;
            if (alpha <= 40.0) {
                EXPECT_NEAR(got, oracle::gamma_expectation(alpha, beta, f), 1e-10);
            } else {
                // |E[cos X / (1 + X)]| <= |(1 + i)^-alpha| for unit scale, below 1e-70 here.
                EXPECT_NEAR(got, 0.0, 1e-12);
            }
        }
    }
}
