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

#include <gtest/gtest.h>

#include "lmk/jpeg.hpp"
#include "lmk/metrics.hpp"

namespace lmk {
namespace {

// Smooth gradient plus texture: closer to natural content than white noise.
Tensor test_image(std::uint64_t seed, std::size_t h = 64, std::size_t w = 64) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  Tensor t({1, 3, h, w});
  for (std::size_t c = 0; c < 3; ++c) {
    auto p = t.plane(0, c);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double base = 60.0 + 40.0 * static_cast<double>(c) + 1.5 * static_cast<double>(x + y);
        p[y * w + x] = std::clamp(base + u(gen), 0.0, 255.0);
      }
    }
  }
  return t;
}

TEST(JpegQuant, ScalingRule) {
  const auto luma50 = jpeg_quant_table(false, 50);
  EXPECT_EQ(luma50[0], 16.0);
  EXPECT_EQ(luma50[63], 99.0);
  EXPECT_EQ(jpeg_quant_table(true, 50)[0], 17.0);
  // q = 10 scales by 5000 / 10 = 500 percent: floor((16 * 500 + 50) / 100) = 80.
  EXPECT_EQ(jpeg_quant_table(false, 10)[0], 80.0);
  for (const bool chroma : {false, true}) {
    for (const double v : jpeg_quant_table(chroma, 100)) EXPECT_EQ(v, 1.0);
    for (const double v : jpeg_quant_table(chroma, 1)) EXPECT_LE(v, 255.0);
  }
}

TEST(Jpeg, ShapeAndRangePreserved) {
  const Tensor img = test_image(1, 40, 56);
  const Tensor out = jpeg_roundtrip(img, 30);
  EXPECT_EQ(out.shape(), img.shape());
  for (const double v : out.data()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 255.0);
  }
}

TEST(Jpeg, QualityIsMonotoneInPsnr) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Tensor img = test_image(seed);
    double prev = 0.0;
    for (const int q : {10, 30, 60, 90, 100}) {
      const double p = psnr(img, jpeg_roundtrip(img, q));
      EXPECT_GE(p, prev) << "q=" << q;
      prev = p;
    }
  }
}

// At q = 100 only coefficient rounding remains: each of the 64 orthonormal
// coefficients moves by at most 0.5, so the per-pixel YCbCr error has standard
// deviation sqrt(1/12) and the RGB error stays well under one gray level on average.
TEST(Jpeg, Quality100IsRoundingOnly) {
  const Tensor img = test_image(9);
  const Tensor out = jpeg_roundtrip(img, 100);
  double sum = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) sum += std::abs(out[i] - img[i]);
  EXPECT_LT(sum / static_cast<double>(img.size()), 0.5);
  EXPECT_LT(max_abs_diff(img, out), 4.0);
}

TEST(Jpeg, ResidualQuantizationIsLinearAtUnitTable) {
  Tensor d({1, 3, 8, 8}, 0.0);
  const Tensor z = jpeg_quantize_residual(d, 50);
  EXPECT_EQ(max_abs_diff(z, d), 0.0);
}

}  // namespace
}  // namespace lmk
