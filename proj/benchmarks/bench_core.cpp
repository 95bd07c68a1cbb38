// Copyright 2026 The squeezenoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "sqn/calibrate.hpp"
#include "sqn/noise.hpp"
#include "sqn/optimize.hpp"
#include "sqn/specfun.hpp"

namespace {

void BM_BesselAll(benchmark::State& state) {
    const double z = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sqn::specfun::bessel_j_all(z, static_cast<int>(z) + 40));
}
BENCHMARK(BM_BesselAll)->Arg(1)->Arg(10)->Arg(100);

void BM_QuadratureVariances(benchmark::State& state) {
    const sqn::ReducedPoint pt{0.9, 0.77, 0.081, static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(sqn::quadrature_variances(pt));
}
BENCHMARK(BM_QuadratureVariances)->Arg(1)->Arg(2);

void BM_OptimizeSqueeze(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sqn::optimize_squeeze(0.0, 1));
}
BENCHMARK(BM_OptimizeSqueeze)->Unit(benchmark::kMillisecond);

void BM_FitUndriven(benchmark::State& state) {
    sqn::SynthesisParams gen;
    gen.junction = {70.0, 0.028};
    gen.drive.measurement_frequency = 7.2e9;
    gen.gain = 1e7;
    gen.amp_noise = 3.0;
    std::vector<double> bias;
    for (int i = 0; i <= 240; ++i) bias.push_back(-90e-6 + 0.75e-6 * i);
    const auto curve = sqn::synthesize_curve(gen, bias, 0.01, 7);
    for (auto _ : state) benchmark::DoNotOptimize(sqn::fit_undriven(curve));
}
BENCHMARK(BM_FitUndriven)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
