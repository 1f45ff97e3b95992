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

#include <gtest/gtest.h>
#include <json.hpp>

#include "lmk/channel.hpp"
#include "lmk/error.hpp"
#include "lmk/rng.hpp"
#include "lmk/stats.hpp"
#include "lmk/toy_codec.hpp"

namespace lmk {
namespace {

const Key256 kKey = derive_key(Key256{}, "channel-test");
const Shape kLatent{1, 4, 32, 32};

ChannelSpec toy(double sigma_inv = 0.0) {
  ChannelSpec s;
  s.kind = ChannelKind::kToyCodec;
  s.sigma_inv = sigma_inv;
  return s;
}

double l2(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

TEST(ChannelSpec, JsonAndTokenForms) {
  const auto s = channel_spec_from_json(nlohmann::json::parse(
      R"({"kind":"toy_codec","upsample":4,"seed":9,"sigma_inv":0.3,"steps":6})"));
  EXPECT_EQ(s.kind, ChannelKind::kToyCodec);
  EXPECT_EQ(s.upsample, 4);
  EXPECT_EQ(s.codec_seed, 9u);
  EXPECT_EQ(s.steps, 6u);
  EXPECT_EQ(channel_spec_from_json(channel_spec_to_json(s)), s);

  EXPECT_EQ(parse_channel_token("noise:0.5").sigma, 0.5);
  EXPECT_EQ(parse_channel_token("toycodec:0.2", s).upsample, 4);
  EXPECT_EQ(parse_channel_token("toycodec:0.2", s).sigma_inv, 0.2);
  EXPECT_EQ(parse_channel_token("bridge:run me").command, "run me");
  EXPECT_THROW(parse_channel_token("vae"), Error);
  EXPECT_THROW(parse_channel_token("noise:-1"), Error);
  EXPECT_THROW(channel_spec_from_json(nlohmann::json::parse(R"({"kind":"gan"})")), Error);
}

TEST(Channel, IdentityIsPassthrough) {
  const Channel ch({}, kLatent, kKey);
  const Tensor x = gaussian_latent(SeededRng(kKey, 1), kLatent);
  const Media m = ch.forward(x);
  EXPECT_EQ(m.kind, MediaKind::kLatent);
  EXPECT_EQ(m.data, x);
  EXPECT_EQ(ch.invert(m, 7), x);
  EXPECT_THROW(ch.forward(Tensor({1, 4, 16, 16})), Error);
}

TEST(Channel, ToyCodecMediaIsBoundedImage) {
  const Channel ch(toy(), kLatent, kKey);
  EXPECT_EQ(ch.media_kind(), MediaKind::kImage);
  const Media m = ch.forward(gaussian_latent(SeededRng(kKey, 2), kLatent));
  EXPECT_EQ(m.data.shape(), (Shape{1, 3, 256, 256}));
  for (const double v : m.data.data()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 255.0);
  }
}

TEST(Channel, ToyCodecIsDeterministicAndKeyedBySeed) {
  const Tensor x = gaussian_latent(SeededRng(kKey, 3), kLatent);
  EXPECT_EQ(Channel(toy(), kLatent, kKey).forward(x).data, Channel(toy(), kLatent, kKey).forward(x).data);
  ChannelSpec other = toy();
  other.codec_seed = 1;
  EXPECT_NE(Channel(toy(), kLatent, kKey).forward(x).data, Channel(other, kLatent, kKey).forward(x).data);
}

TEST(ToyCodec, MixingRowsAreOrthonormal) {
  const ToyCodec codec(4, 32, 32, 8, 0);
  const Eigen::MatrixXd m = codec.mixing();
  EXPECT_LT((m * m.transpose() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ToyCodec, ForwardRespectsLipschitzBound) {
  const Channel ch(toy(), kLatent, kKey);
  const double bound = ch.codec()->lipschitz_bound();
  for (std::uint64_t i = 0; i < 10; ++i) {
    const Tensor x = gaussian_latent(SeededRng(kKey, 100 + i), kLatent);
    Tensor y = x;
    const Tensor d = gaussian_latent(SeededRng(kKey, 200 + i), kLatent);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += 0.1 * d[k];
    EXPECT_LE(l2(ch.forward(x).data, ch.forward(y).data), bound * l2(x, y) * (1.0 + 1e-12));
  }
}

TEST(ToyCodec, RoundTripSnrAbove20Db) {
  const Channel ch(toy(), kLatent, kKey);
  for (std::uint64_t i = 0; i < 5; ++i) {
    const Tensor x = gaussian_latent(SeededRng(kKey, 10 + i), kLatent);
    const Tensor r = ch.invert(ch.forward(x), 0);
    double signal = 0.0;
    for (const double v : x.data()) signal += v * v;
    const double e = l2(x, r);
    EXPECT_GT(10.0 * std::log10(signal / (e * e)), 20.0);
  }
}

TEST(Channel, LatentNoiseVarianceMatchesSigma) {
  ChannelSpec s;
  s.kind = ChannelKind::kLatentNoise;
  s.sigma = 0.5;
  const Shape shape{1, 4, 64, 64};
  const Channel ch(s, shape, kKey);
  const Tensor x = gaussian_latent(SeededRng(kKey, 4), shape);
  const Tensor r = ch.invert(ch.forward(x), 11);
  const double n = static_cast<double>(x.size());
  const double mse = l2(x, r) * l2(x, r) / n;
  // Var of the sample mean of sigma^2 chi^2_1 is 2 sigma^4 / n.
  EXPECT_NEAR(mse, 0.25, 3.0 * std::sqrt(2.0 * 0.0625 / n));
  EXPECT_EQ(ch.invert(ch.forward(x), 11), r);
  EXPECT_NE(ch.invert(ch.forward(x), 12), r);
}

TEST(Channel, TrajectoryInterpolatesToLatentEquivalent) {
  const Channel ch(toy(), kLatent, kKey);
  const Tensor x = gaussian_latent(SeededRng(kKey, 5), kLatent);
  const auto states = ch.trajectory(x);
  ASSERT_EQ(states.size(), 10u);
  EXPECT_EQ(states.front(), x);
  EXPECT_LT(max_abs_diff(states.back(), ch.latent_equivalent(x)), 1e-12);
  for (std::size_t k = 0; k < x.size(); k += 97) {
    EXPECT_NEAR(states[3][k], (6.0 * states[0][k] + 3.0 * states[9][k]) / 9.0, 1e-12);
  }
  EXPECT_THROW(ch.trajectory_state(x, 10), Error);
}

TEST(Channel, InjectAtWithIdentityModifierMatchesForward) {
  const Channel ch(toy(), kLatent, kKey);
  const Tensor x = gaussian_latent(SeededRng(kKey, 6), kLatent);
  const Media a = ch.inject_at(x, 5, [](const Tensor& t) { return t; });
  EXPECT_LT(max_abs_diff(a.data, ch.forward(x).data), 1e-9);
  const Media b = ch.inject_at(x, 5, [](const Tensor& t) {
    Tensor u = t;
    u[0] += 1.0;
    return u;
  });
  EXPECT_GT(max_abs_diff(b.data, a.data), 0.0);
  EXPECT_THROW(ch.inject_at(x, 5, [](const Tensor&) { return Tensor({1, 1, 1, 1}); }), Error);
}

}  // namespace
}  // namespace lmk
