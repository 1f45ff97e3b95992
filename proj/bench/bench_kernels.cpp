// Copyright 2026 The LatentMark Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP for each kernel. Run with OMP_NUM_THREADS set to
// compare scaling; the argument is the square plane size.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "lmk/kernels.hpp"

namespace {

using lmk::kernels::Exec;

std::vector<double> random_plane(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 40.0);
  std::vector<double> v(n);
  for (double& x : v) x = normal(gen);
  return v;
}

template <Exec E>
void BM_FftRows(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto re = random_plane(n * n, 1);
  std::vector<std::complex<double>> data(re.begin(), re.end());
  for (auto _ : state) {
    lmk::kernels::fft_rows(data, n, n, false, E);
    lmk::kernels::fft_rows(data, n, n, true, E);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(2 * n * n));
}

template <Exec E>
void BM_Convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto in = random_plane(n * n, 2);
  std::vector<double> out(n * n);
  std::vector<double> k(11);
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double d = static_cast<double>(i) - 5.0;
    k[i] = std::exp(-d * d / 8.0);
  }
  for (auto _ : state) {
    lmk::kernels::convolve_separable(in, out, n, n, k, k, E);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}

template <Exec E>
void BM_DctQuantize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto src = random_plane(n * n, 3);
  lmk::kernels::DctTable q;
  q.fill(16.0);
  std::vector<double> plane(src);
  for (auto _ : state) {
    state.PauseTiming();
    plane = src;
    state.ResumeTiming();
    lmk::kernels::dct_quantize_blocks(plane, n, n, q, E);
    benchmark::DoNotOptimize(plane.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}

template <Exec E>
void BM_Resample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto in = random_plane(n * n, 4);
  std::vector<double> out(n * n);
  lmk::kernels::AffineMap m;
  const double c = std::cos(0.26), s = std::sin(0.26), h = static_cast<double>(n) / 2.0;
  m.xx = c;
  m.xy = s;
  m.yx = -s;
  m.yy = c;
  m.x0 = h - c * h - s * h;
  m.y0 = h + s * h - c * h;
  for (auto _ : state) {
    lmk::kernels::resample_bilinear(in, n, n, out, n, n, m, lmk::kernels::Border::kZero, E);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}

BENCHMARK_TEMPLATE(BM_FftRows, Exec::kSerial)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK_TEMPLATE(BM_FftRows, Exec::kParallel)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK_TEMPLATE(BM_Convolve, Exec::kSerial)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK_TEMPLATE(BM_Convolve, Exec::kParallel)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK_TEMPLATE(BM_DctQuantize, Exec::kSerial)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK_TEMPLATE(BM_DctQuantize, Exec::kParallel)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK_TEMPLATE(BM_Resample, Exec::kSerial)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK_TEMPLATE(BM_Resample, Exec::kParallel)->Arg(64)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
