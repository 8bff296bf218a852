// SPDX-License-Identifier: Apache-2.0
//
// starsim: link-level simulator for UAV-mounted STAR-RIS aided THz multi-user MIMO
// Copyright (C) 2026 The starsim Authors
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

#include "starsim/env.hpp"
#include "starsim/estimate.hpp"
#include "starsim/gi.hpp"
#include "starsim/place.hpp"
#include "starsim/rng.hpp"
#include "starsim/sim.hpp"

#include <benchmark/benchmark.h>

using namespace starsim;

namespace
{
Environment scene()
{
    Scenario sc;
    sc.master_seed = 3;
    return trial_environment(sc, trial_seed(sc, 0));
}

void BM_LineOfSight(benchmark::State &state)
{
    const Environment env = scene();
    Rng rng(1);
    std::vector<std::pair<Point3, Point3>> segs;
    for (int i = 0; i < 1024; ++i)
        segs.emplace_back(Point3{rng.uniform(0, 19), rng.uniform(0, 19), rng.uniform(0, 19)},
                          Point3{rng.uniform(0, 19), rng.uniform(0, 19), rng.uniform(0, 19)});
    size_t i = 0;
    for (auto _ : state)
    {
        const auto &[a, b] = segs[i++ & 1023];
        benchmark::DoNotOptimize(env.los(a, b));
    }
}
BENCHMARK(BM_LineOfSight);

void BM_Placement(benchmark::State &state)
{
    const Environment env = scene();
    const Point3 centroid{12.5, 8, 1.06};
    for (auto _ : state)
        benchmark::DoNotOptimize(find_star_position(env, centroid));
}
BENCHMARK(BM_Placement)->Unit(benchmark::kMillisecond);

void BM_BruteForcePlacement(benchmark::State &state)
{
    const Environment env = scene();
    const Point3 centroid{12.5, 8, 1.06};
    for (auto _ : state)
        benchmark::DoNotOptimize(brute_force_star(env, centroid));
}
BENCHMARK(BM_BruteForcePlacement)->Unit(benchmark::kMillisecond);

void BM_Bals(benchmark::State &state)
{
    const int side = static_cast<int>(state.range(0));
    const int R = side * side;
    Rng rng(2);
    const CMat U = rng.complex_normal_mat(R, R);
    const CMat A = rng.complex_normal_mat(4, R);
    const TrainingProtocol p = make_protocol(4, R);
    const auto Y = simulate_training(U, A, p, 20.0, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(bals_fit(Y, p, R, 50, 0.0, 4));
}
BENCHMARK(BM_Bals)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_GhostImagingField(benchmark::State &state)
{
    const int side = static_cast<int>(state.range(0));
    const PixelGrid grid{side, side, 0.1, 0.0, 0.0};
    const auto emitters = emitter_spectral_layout(grid, 100.0, kSpeedOfLight / 2.6e9);
    for (auto _ : state)
        benchmark::DoNotOptimize(synthesize_field(emitters, grid, 0.0, 2 * grid.size(), 100e6, 5));
}
BENCHMARK(BM_GhostImagingField)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
} // namespace

BENCHMARK_MAIN();
