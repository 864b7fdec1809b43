// Copyright 2026 The rbmscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "rbmscope/spectral.hpp"
#include "rbmscope/symmetry.hpp"

namespace {

using namespace rbmscope;

RbmParams bench_params(Index n, Index m) {
  Rng rng(1);
  return init_params(n, m, 0.01, rng);
}

void BM_Decompose(benchmark::State& state) {
  const RbmParams p = bench_params(state.range(0), state.range(1));
  for (auto _ : state) {
    const ReciprocalFrame f = decompose(p);
    benchmark::DoNotOptimize(f.lambdas.data());
  }
}
BENCHMARK(BM_Decompose)->Args({16, 8})->Args({200, 150})->Unit(benchmark::kMillisecond);

void BM_SingularValuesOnly(benchmark::State& state) {
  const RbmParams p = bench_params(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(singular_values(p.w).data());
  }
}
BENCHMARK(BM_SingularValuesOnly)->Args({200, 150})->Args({784, 500})->Unit(benchmark::kMillisecond);

void BM_RotationBurst(benchmark::State& state) {
  RotationPlan plan;
  plan.dim = state.range(0);
  plan.n_rotations = static_cast<int>(state.range(0) / 10);
  Rng rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_rotation_burst(plan, rng).data());
  }
}
BENCHMARK(BM_RotationBurst)->Arg(100)->Arg(784)->Unit(benchmark::kMillisecond);

void BM_SymmetryProbe(benchmark::State& state) {
  const RbmParams p = bench_params(state.range(0), state.range(1));
  Rng rng(3);
  for (auto _ : state) {
    const double jsd = rotation_symmetry_probe(p, default_probe_plan(p.n_visible()),
                                               default_probe_plan(p.n_hidden()), 200, rng);
    benchmark::DoNotOptimize(jsd);
  }
}
BENCHMARK(BM_SymmetryProbe)->Args({100, 60})->Unit(benchmark::kMillisecond);

void BM_KurtosisScan(benchmark::State& state) {
  const RbmParams p = bench_params(state.range(0), state.range(1));
  const ReciprocalFrame f = decompose(p);
  for (auto _ : state) {
    const KurtosisScan scan = kurtosis_scan(f, 10000, 4);
    benchmark::DoNotOptimize(scan.mean_y);
  }
}
BENCHMARK(BM_KurtosisScan)->Args({64, 48})->Unit(benchmark::kMillisecond);

}  // namespace
