// Copyright 2026 The sdnlw Authors.
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

#include "sdnlw/besov.hpp"
#include "sdnlw/dynamics.hpp"
#include "sdnlw/functionals.hpp"
#include "sdnlw/gaussian.hpp"
#include "sdnlw/rng.hpp"
#include "sdnlw/spectral.hpp"

namespace {

using namespace sdnlw;

PhaseState state(int N) { return sample_mu({1.0, N}, RngStream(1, 0)); }

void BM_Philox(benchmark::State& st) {
  PhiloxCounter c{0, 0, 0, 0};
  for (auto _ : st) {
    c = philox4x32_10(c, {7, 11});
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_Philox);

void BM_SampleMu(benchmark::State& st) {
  const MeasureSpec spec{1.0, static_cast<int>(st.range(0))};
  std::uint64_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(sample_mu(spec, RngStream(1, i++)));
}
BENCHMARK(BM_SampleMu)->RangeMultiplier(2)->Range(8, 128);

void BM_DealiasedCubic(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  const SpectralField u = state(N).u;
  for (auto _ : st) benchmark::DoNotOptimize(dealiased_product(u, u, u, N));
}
BENCHMARK(BM_DealiasedCubic)->RangeMultiplier(2)->Range(8, 256);

void BM_StrangStep(benchmark::State& st) {
  FlowConfig cfg;
  cfg.N = static_cast<int>(st.range(0));
  cfg.dt = 0.01;
  cfg.T = 0.01;
  const TruncatedFlow flow(cfg);
  PhaseState x = state(cfg.N);
  const RngStream noise(1, 0, StreamPurpose::noise);
  std::uint64_t k = 0;
  for (auto _ : st) {
    x = flow.step(x, noise, k++);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(2)->Range(8, 128);

void BM_Energy(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  const PhaseState x = state(N);
  for (auto _ : st) benchmark::DoNotOptimize(energy(x, 1.0, N));
}
BENCHMARK(BM_Energy)->RangeMultiplier(2)->Range(8, 64);

void BM_BracketHE(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  const PhaseState x = state(N);
  for (auto _ : st) benchmark::DoNotOptimize(bracket_HE(x, 1.0, N));
}
BENCHMARK(BM_BracketHE)->RangeMultiplier(2)->Range(8, 64);

void BM_HolderNorm(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  const PhaseState x = state(N);
  for (auto _ : st) benchmark::DoNotOptimize(holder_norm(x, 0.5));
}
BENCHMARK(BM_HolderNorm)->RangeMultiplier(2)->Range(8, 64);

}  // namespace

BENCHMARK_MAIN();
