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

// The OpenMP kernels must agree bit for bit with the serial references, and
// the references with naive formulas.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lmk/error.hpp"
#include "lmk/kernels.hpp"
#include "oracles.hpp"

namespace lmk::kernels {
namespace {

std::vector<double> random_plane(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> v(n);
  for (double& x : v) x = normal(gen);
  return v;
}

class ExecGuard {
 public:
  ExecGuard() : saved_(default_exec()) {}
  ~ExecGuard() { set_default_exec(saved_); }

 private:
  Exec saved_;
};

TEST(Kernels, FftSerialEqualsParallel) {
  for (const std::size_t n : {8u, 32u, 128u}) {
    const auto re = random_plane(n * n, n);
    std::vector<std::complex<double>> a(re.begin(), re.end());
    auto b = a;
    serial::fft_rows(a, n, n, false);
    omp::fft_rows(b, n, n, false);
    EXPECT_EQ(a, b);
    serial::fft_rows(a, n, n, true);
    omp::fft_rows(b, n, n, true);
    EXPECT_EQ(a, b);
  }
}

TEST(Kernels, FftRowsMatchNaiveDft) {
  const std::size_t n = 16;
  const auto x = random_plane(n, 5);
  std::vector<std::complex<double>> row(x.begin(), x.end());
  serial::fft_rows(row, 1, n, false);
  const auto want = oracle::naive_dft2(x, 1, n);
  for (std::size_t k = 0; k < n; ++k) EXPECT_LT(std::abs(row[k] - want[k]), 1e-12);
}

TEST(Kernels, ConvolveSerialEqualsParallel) {
  const std::size_t h = 37, w = 53;
  const auto in = random_plane(h * w, 1);
  const std::vector<double> ky{0.25, 0.5, 0.25};
  const std::vector<double> kx{0.1, 0.2, 0.4, 0.2, 0.1};
  std::vector<double> a(h * w), b(h * w);
  serial::convolve_separable(in, a, h, w, ky, kx);
  omp::convolve_separable(in, b, h, w, ky, kx);
  EXPECT_EQ(a, b);

  std::vector<double> va((h - 4) * (w - 4)), vb(va.size());
  serial::convolve_separable_valid(in, va, h, w, kx);
  omp::convolve_separable_valid(in, vb, h, w, kx);
  EXPECT_EQ(va, vb);
}

TEST(Kernels, ConvolveMatchesDirectEdgeClampedSum) {
  const std::size_t h = 9, w = 11;
  const auto in = random_plane(h * w, 2);
  const std::vector<double> k{0.2, 0.3, 0.5};
  std::vector<double> out(h * w);
  serial::convolve_separable(in, out, h, w, k, k);
  auto at = [&](long y, long x) {
    y = std::clamp<long>(y, 0, static_cast<long>(h) - 1);
    x = std::clamp<long>(x, 0, static_cast<long>(w) - 1);
    return in[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)];
  };
  for (long y = 0; y < static_cast<long>(h); ++y) {
    for (long x = 0; x < static_cast<long>(w); ++x) {
      double s = 0.0;
      for (long i = 0; i < 3; ++i)
        for (long j = 0; j < 3; ++j) s += k[i] * k[j] * at(y + i - 1, x + j - 1);
      EXPECT_NEAR(out[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)], s, 1e-12);
    }
  }
}

TEST(Kernels, DctQuantizeSerialEqualsParallel) {
  const std::size_t h = 64, w = 48;
  DctTable q;
  for (std::size_t i = 0; i < 64; ++i) q[i] = 1.0 + static_cast<double>(i % 7);
  auto a = random_plane(h * w, 3, 40.0);
  auto b = a;
  serial::dct_quantize_blocks(a, h, w, q);
  omp::dct_quantize_blocks(b, h, w, q);
  EXPECT_EQ(a, b);
}

// An 8x8 block of basis function (u, v) with integer amplitude survives a
// unit quantizer unchanged.
TEST(Kernels, DctPreservesIntegerCoefficientBlock) {
  const double amp = 12.0;
  std::vector<double> block(64);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      const double cy = std::sqrt(2.0 / 8.0) * std::cos((2 * y + 1) * 2 * std::numbers::pi / 16.0);
      const double cx = std::sqrt(2.0 / 8.0) * std::cos((2 * x + 1) * 3 * std::numbers::pi / 16.0);
      block[y * 8 + x] = amp * cy * cx;
    }
  }
  auto out = block;
  DctTable ones;
  ones.fill(1.0);
  serial::dct_quantize_blocks(out, 8, 8, ones);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(out[i], block[i], 1e-9);
  EXPECT_THROW(serial::dct_quantize_blocks(out, 8, 4, ones), Error);
}

TEST(Kernels, ResampleSerialEqualsParallel) {
  const std::size_t h = 40, w = 30;
  const auto in = random_plane(h * w, 4);
  AffineMap m;
  m.xx = std::cos(0.3);
  m.xy = std::sin(0.3);
  m.yx = -std::sin(0.3);
  m.yy = std::cos(0.3);
  m.x0 = 3.2;
  m.y0 = -1.7;
  for (const Border border : {Border::kZero, Border::kClamp}) {
    std::vector<double> a(h * w), b(h * w);
    serial::resample_bilinear(in, h, w, a, h, w, m, border);
    omp::resample_bilinear(in, h, w, b, h, w, m, border);
    EXPECT_EQ(a, b);
  }
}

TEST(Kernels, ResampleIdentityAndHalfPixelShift) {
  const std::size_t h = 6, w = 7;
  const auto in = random_plane(h * w, 6);
  std::vector<double> out(h * w);
  serial::resample_bilinear(in, h, w, out, h, w, AffineMap{}, Border::kZero);
  EXPECT_EQ(out, in);
  AffineMap shift;
  shift.x0 = 0.5;
  serial::resample_bilinear(in, h, w, out, h, w, shift, Border::kClamp);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x + 1 < w; ++x) {
      EXPECT_NEAR(out[y * w + x], 0.5 * (in[y * w + x] + in[y * w + x + 1]), 1e-12);
    }
  }
}

TEST(Kernels, DispatchFollowsDefault) {
  ExecGuard guard;
  const auto in = random_plane(64, 8);
  std::vector<double> a(64), b(64);
  const std::vector<double> k{1.0 / 3, 1.0 / 3, 1.0 / 3};
  set_default_exec(Exec::kSerial);
  EXPECT_EQ(default_exec(), Exec::kSerial);
  convolve_separable(in, a, 8, 8, k, k);
  set_default_exec(Exec::kParallel);
  convolve_separable(in, b, 8, 8, k, k);
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace lmk::kernels
