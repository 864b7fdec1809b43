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

#include "rbmscope/partition.hpp"
#include "rbmscope/rbm.hpp"
#include "rbmscope/training.hpp"

namespace {

using namespace rbmscope;

RbmParams bench_params(Index n, Index m) {
  Rng rng(1);
  return init_params(n, m, 0.05, rng);
}

void BM_BlockGibbsSweep(benchmark::State& state) {
  const Index n = state.range(0);
  const Index m = state.range(1);
  const RbmParams p = bench_params(n, m);
  Rng rng(2);
  ChainState chain{Vector::Zero(n), Vector::Zero(m), 0};
  for (auto _ : state) {
    chain = block_gibbs(p, std::move(chain), 1, rng);
    benchmark::DoNotOptimize(chain.v.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BlockGibbsSweep)->Args({16, 8})->Args({784, 500});

void BM_FreeEnergyVisible(benchmark::State& state) {
  const Index n = state.range(0);
  const Index m = state.range(1);
  const RbmParams p = bench_params(n, m);
  Rng rng(3);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.bit();
  for (auto _ : state) {
    benchmark::DoNotOptimize(free_energy_visible(p, v));
  }
}
BENCHMARK(BM_FreeEnergyVisible)->Args({784, 500});

void BM_ExactGradient(benchmark::State& state) {
  const RbmParams p = bench_params(16, 8);
  Rng rng(4);
  Matrix batch(16, 32);
  for (Index c = 0; c < 32; ++c) {
    for (Index i = 0; i < 16; ++i) batch(i, c) = rng.bit();
  }
  for (auto _ : state) {
    const Gradients g = exact_gradient(p, batch);
    benchmark::DoNotOptimize(g.d_w.data());
  }
}
BENCHMARK(BM_ExactGradient);

void BM_AisChainStep(benchmark::State& state) {
  const RbmParams p = bench_params(8, 6);
  AisConfig cfg;
  cfg.n_temps = state.range(0);
  cfg.n_chains = 8;
  cfg.seed = 5;
  for (auto _ : state) {
    const LogZEstimate est = ais_log_z(p, cfg);
    benchmark::DoNotOptimize(est.log_z);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 8);
}
BENCHMARK(BM_AisChainStep)->Arg(100)->Arg(1000);

}  // namespace
