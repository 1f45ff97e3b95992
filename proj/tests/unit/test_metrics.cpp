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

#include "lmk/error.hpp"
#include "lmk/metrics.hpp"

namespace lmk {
namespace {

Tensor textured(std::size_t frames = 1, std::size_t side = 48, std::uint64_t seed = 1) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(60.0, 190.0);
  Tensor t({frames, 3, side, side});
  for (double& v : t.data()) v = u(gen);
  return t;
}

TEST(Metrics, IdenticalInputsHitTheCaps) {
  const Tensor a = textured();
  EXPECT_EQ(psnr(a, a), kPsnrCap);
  EXPECT_DOUBLE_EQ(ssim(a, a), 1.0);
  EXPECT_EQ(mse(a, a), 0.0);
}

TEST(Metrics, ConstantOffsetPsnr) {
  const Tensor a = textured();
  Tensor b = a;
  for (double& v : b.data()) v += 10.0;
  EXPECT_DOUBLE_EQ(mse(a, b), 100.0);
  EXPECT_NEAR(psnr(a, b), 10.0 * std::log10(65025.0 / 100.0), 1e-12);
  EXPECT_NEAR(psnr(a, b), 28.13, 0.01);
}

TEST(Metrics, InvertedImageHasNegativeSsim) {
  const Tensor a = textured();
  Tensor b = a;
  for (double& v : b.data()) v = 255.0 - v;
  EXPECT_LT(ssim(a, b), 0.0);
  EXPECT_GE(ssim(a, b), -1.0);
}

TEST(Metrics, SsimDropsWithNoise) {
  const Tensor a = textured();
  std::mt19937_64 gen(2);
  std::normal_distribution<double> n(0.0, 1.0);
  double prev = 1.0;
  for (const double sigma : {2.0, 10.0, 40.0}) {
    Tensor b = a;
    for (double& v : b.data()) v += sigma * n(gen);
    const double s = ssim(a, b);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(Metrics, ShapeMismatchThrows) {
  EXPECT_THROW(psnr(textured(1, 48), textured(1, 32)), Error);
  EXPECT_THROW(ssim(textured(1, 48), textured(1, 32)), Error);
}

TEST(VideoProxies, StaticVideo) {
  Tensor v({4, 3, 16, 16}, 90.0);
  const auto p = video_quality_proxies(v);
  EXPECT_EQ(p.frame_smoothness, 1.0);
  EXPECT_EQ(p.dynamic_degree_proxy, 0.0);
}

TEST(VideoProxies, LinearFadeIsSmooth) {
  Tensor v({5, 3, 8, 8});
  for (std::size_t t = 0; t < 5; ++t)
    for (double& x : v.frame(t)) x = 20.0 * static_cast<double>(t);
  const auto p = video_quality_proxies(v);
  EXPECT_NEAR(p.frame_smoothness, 1.0, 1e-12);
  EXPECT_NEAR(p.dynamic_degree_proxy, 20.0 / 255.0, 1e-12);
}

TEST(VideoProxies, AlternatingBlackWhite) {
  Tensor v({6, 3, 8, 8});
  for (std::size_t t = 0; t < 6; ++t)
    for (double& x : v.frame(t)) x = t % 2 ? 255.0 : 0.0;
  const auto p = video_quality_proxies(v);
  EXPECT_DOUBLE_EQ(p.dynamic_degree_proxy, 1.0);
  EXPECT_LT(p.frame_smoothness, 0.5);
  EXPECT_THROW(video_quality_proxies(Tensor({1, 3, 8, 8})), Error);
}

}  // namespace
}  // namespace lmk
