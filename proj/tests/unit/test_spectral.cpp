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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lmk/error.hpp"
#include "lmk/spectral.hpp"
#include "oracles.hpp"

namespace lmk {
namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(gen);
  return v;
}

TEST(Spectral, ConstantPlaneHasOnlyDc) {
  const std::vector<double> ones(64, 1.0);
  const auto s = fft2_centered(ones, 8, 8);
  EXPECT_NEAR(s.at(4, 4).real(), 8.0, 1e-12);
  EXPECT_NEAR(s.at(4, 4).imag(), 0.0, 1e-12);
  for (std::size_t i = 0; i < 64; ++i) {
    if (i != 4 * 8 + 4) EXPECT_LT(std::abs(s.data[i]), 1e-12);
  }
}

TEST(Spectral, MatchesShiftedNaiveDft) {
  const std::size_t h = 8, w = 16;
  const auto x = noise(h * w, 1);
  const auto s = fft2_centered(x, h, w);
  const auto ref = oracle::naive_dft2(x, h, w);
  const double norm = std::sqrt(static_cast<double>(h * w));
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      const auto want = ref[((i + h / 2) % h) * w + (j + w / 2) % w] / norm;
      EXPECT_LT(std::abs(s.at(i, j) - want), 1e-12) << i << "," << j;
    }
  }
}

TEST(Spectral, RoundTripAndParseval) {
  for (const std::size_t n : {8u, 32u, 64u}) {
    const auto x = noise(n * n, n);
    const auto s = fft2_centered(x, n, n);
    double max_imag = -1.0;
    const auto back = ifft2_centered_real(s, &max_imag);
    double err = 0.0, ex = 0.0, es = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      err = std::max(err, std::abs(back[i] - x[i]));
      ex += x[i] * x[i];
      es += std::norm(s.data[i]);
    }
    EXPECT_LT(err, 1e-12);
    EXPECT_LT(max_imag, 1e-12);
    EXPECT_NEAR(es / ex, 1.0, 1e-12);
  }
}

TEST(Spectral, RealInputHasConjugateSymmetry) {
  const std::size_t n = 16;
  const auto s = fft2_centered(noise(n * n, 9), n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_LT(std::abs(s.at(i, j) - std::conj(s.at(mirror_index(i, n), mirror_index(j, n)))), 1e-12);
    }
  }
}

TEST(FourierMask, CircleMatchesBruteForce) {
  for (const int r : {1, 3, 10, 32}) {
    const auto m = circle_mask(64, 64, r);
    std::size_t count = 0;
    for (std::size_t i = 0; i < 64; ++i) {
      for (std::size_t j = 0; j < 64; ++j) {
        const double di = static_cast<double>(i) - 32.0;
        const double dj = static_cast<double>(j) - 32.0;
        const bool in = std::lround(std::sqrt(di * di + dj * dj)) < r;
        EXPECT_EQ(m.contains(i, j), in) << r << " " << i << "," << j;
        count += in ? 1 : 0;
      }
    }
    EXPECT_EQ(m.count(), count);
    EXPECT_EQ(m.members().size(), count);
  }
  EXPECT_EQ(circle_mask(8, 8, 1).count(), 1u);
  EXPECT_THROW(circle_mask(8, 8, 0), Error);
  EXPECT_THROW(circle_mask(8, 8, 5), Error);
}

TEST(FourierMask, RingsAreDisjointAndSymmetric) {
  const auto set = ring_set_mask(32, 32, 6);
  std::size_t total = 0;
  for (int r = 1; r <= 6; ++r) {
    const std::vector<int> one{r};
    const auto ring = ring_mask(32, 32, one);
    total += ring.count();
    for (std::size_t i = 0; i < 32; ++i) {
      for (std::size_t j = 0; j < 32; ++j) {
        if (!ring.contains(i, j)) continue;
        EXPECT_EQ(rounded_radius(i, j, 32, 32), r);
        // Cells whose mirror wraps to row or column 0 have no partner inside the centered grid.
        if (i > 0 && j > 0) EXPECT_TRUE(ring.contains(32 - i, 32 - j));
      }
    }
  }
  EXPECT_EQ(set.count(), total);
  EXPECT_EQ(ring_set_mask(32, 32, 0).count(), 0u);
}

}  // namespace
}  // namespace lmk
