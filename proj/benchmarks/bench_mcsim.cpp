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

#include <Eigen/Dense>

#include "moris/channel.hpp"
#include "moris/mcsim.hpp"
#include "moris/rng.hpp"

namespace ch = moris::channel;
namespace mc = moris::mcsim;

static void BM_Philox(benchmark::State& state) {
    moris::rng::Stream s(1, 0, 0);
    for (auto _ : state) benchmark::DoNotOptimize(s.next_u32());
}
BENCHMARK(BM_Philox);

static void BM_VonMises(benchmark::State& state) {
    moris::rng::Stream s(1, 0, 0);
    for (auto _ : state) benchmark::DoNotOptimize(mc::sample_von_mises(8.0, s));
}
BENCHMARK(BM_VonMises);

static void BM_SamplerDraw(benchmark::State& state) {
    const auto geom = ch::RisGeometry::near_square(static_cast<int>(state.range(0)));
    const mc::CorrelatedNakagamiSampler sampler(geom, 0.5, 2.5);
    Eigen::VectorXd u(geom.elements());
    std::uint64_t frame = 0;
    for (auto _ : state) {
        moris::rng::Stream s(3, frame++, 0);
        sampler.sample(s, u);
        benchmark::DoNotOptimize(u.data());
    }
}
BENCHMARK(BM_SamplerDraw)->Arg(16)->Arg(100);

static void BM_Frame(benchmark::State& state) {
    mc::SimConfig cfg;
    cfg.geometry = ch::RisGeometry::near_square(16);
    cfg.fading.phase_error = ch::VonMises{8.0};
    for (int i = 0; i < state.range(0); ++i) cfg.interference.interferers.push_back({16, std::nullopt});
    const mc::LinkSimulator sim(cfg);
    std::uint64_t frame = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sim.simulate_frame(frame++));
}
BENCHMARK(BM_Frame)->Arg(0)->Arg(1)->Arg(10);
BENCHMARK_MAIN();
