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

#include <benchmark/benchmark.h>

#include "moris/perf.hpp"
#include "moris/specfun.hpp"

namespace sf = moris::specfun;

static void BM_MarcumQ1(benchmark::State& state) {
    double a = 3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sf::marcum_q1(a, 4.0));
        a += 1e-9;
    }
}
BENCHMARK(BM_MarcumQ1);

static void BM_Hyp2F1Half(benchmark::State& state) {
    const double x = static_cast<double>(state.range(0)) / 1000.0;
    for (auto _ : state) benchmark::DoNotOptimize(sf::hyp2f1_half(2.5, x));
}
BENCHMARK(BM_Hyp2F1Half)->Arg(500)->Arg(990)->Arg(999);

static void BM_MeijerG(benchmark::State& state) {
    const double alpha = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sf::meijer_g_2232(alpha, 10.0));
}
BENCHMARK(BM_MeijerG)->Arg(1)->Arg(10)->Arg(50);

static void BM_UpperGamma(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sf::regularized_upper_gamma(17.3, 21.0));
}
BENCHMARK(BM_UpperGamma);

static void BM_ExpectedLogGain(benchmark::State& state) {
    const auto method = state.range(0) == 0 ? moris::perf::LogGainMethod::ClosedForm
                                            : moris::perf::LogGainMethod::Quadrature;
    const moris::perf::SnrModel model{10.0, {12.0, 0.4}, 0.8};
    for (auto _ : state) benchmark::DoNotOptimize(moris::perf::expected_log_gain(model, method));
}
BENCHMARK(BM_ExpectedLogGain)->Arg(0)->Arg(1);
