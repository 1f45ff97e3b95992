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

#include "lmk/toy_codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "lmk/error.hpp"
#include "lmk/kernels.hpp"
#include "lmk/rng.hpp"

namespace lmk {
namespace {

constexpr std::size_t kMixedChannels = 3;

kernels::AffineMap upsample_map(int u) {
  const double inv = 1.0 / u;
  kernels::AffineMap m;
  m.xx = inv;
  m.x0 = 0.5 * inv - 0.5;
  m.yy = inv;
  m.y0 = 0.5 * inv - 0.5;
  return m;
}

Eigen::MatrixXd box_down_matrix(std::size_t n, int u) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n * u));
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < u; ++k) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i * u + k)) = 1.0 / u;
  }
  return d;
}

Eigen::MatrixXd pool_matrix(std::size_t out, std::size_t in) {
  const std::size_t block = in / out;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  for (std::size_t i = 0; i < out; ++i) {
    for (std::size_t k = 0; k < block; ++k) {
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i * block + k)) = 1.0 / static_cast<double>(block);
    }
  }
  return p;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.transpose() * m);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

// Walsh carriers ordered coarse to fine: quadrant split first, then half
// splits, then the rest. Each is zero-mean with unit magnitude per pixel.
std::vector<std::pair<std::size_t, std::size_t>> carrier_order(int u) {
  const auto half = static_cast<std::size_t>(u / 2);
  std::vector<std::pair<std::size_t, std::size_t>> order = {{half, half}, {half, 0}, {0, half}};
  for (std::size_t a = 0; a < static_cast<std::size_t>(u); ++a) {
    for (std::size_t b = 0; b < static_cast<std::size_t>(u); ++b) {
      if (a == 0 && b == 0) continue;
      if (std::find(order.begin(), order.end(), std::pair{a, b}) == order.end()) order.emplace_back(a, b);
    }
  }
  return order;
}

}  // namespace

ToyCodec::ToyCodec(std::size_t channels, std::size_t height, std::size_t width, int upsample,
                   std::uint64_t seed)
    : channels_(channels), height_(height), width_(width), upsample_(upsample) {
  require(upsample == 4 || upsample == 8, ErrorKind::kConfig,
          "toy_codec upsample factor must be 4 or 8, got " + std::to_string(upsample));
  require(channels >= kMixedChannels, ErrorKind::kShape,
          "toy_codec needs at least 3 latent channels, got " + std::to_string(channels));
  require(channels - kMixedChannels < static_cast<std::size_t>(upsample * upsample), ErrorKind::kShape,
          "toy_codec cannot carry " + std::to_string(channels) + " channels at upsample " +
              std::to_string(upsample));
  require(height > 0 && width > 0, ErrorKind::kShape, "toy_codec needs a nonempty latent plane");

  // Keyed orthogonal matrix: QR of a Gaussian matrix with the sign of R's
  // diagonal folded in, so the factorization is unique.
  Key256 key{};
  key[0] = static_cast<std::uint32_t>(seed);
  key[1] = static_cast<std::uint32_t>(seed >> 32);
  const SeededRng rng(derive_key(key, "toy-codec/mix"), 0);
  const auto n = static_cast<Eigen::Index>(channels);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal_at(static_cast<std::uint64_t>(i * n + j));
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  transform_ = q.transpose();

  const Eigen::MatrixXd dh = box_down_matrix(height, upsample) * upsample_matrix(height);
  const Eigen::MatrixXd dw = box_down_matrix(width, upsample) * upsample_matrix(width);
  inv_rows_ = dh.fullPivLu().inverse();
  inv_cols_ = dw.fullPivLu().inverse();
  carriers_ = carrier_order(upsample);
}

Shape ToyCodec::media_shape(std::size_t frames) const {
  return {frames, kMixedChannels, height_ * upsample_, width_ * upsample_};
}

Eigen::MatrixXd ToyCodec::upsample_matrix(std::size_t n) const {
  const std::size_t out = n * upsample_;
  const kernels::AffineMap m = upsample_map(upsample_);
  Eigen::MatrixXd up = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(n));
  auto clamp = [n](double i) {
    return static_cast<Eigen::Index>(std::clamp(i, 0.0, static_cast<double>(n - 1)));
  };
  for (std::size_t k = 0; k < out; ++k) {
    const double src = m.xx * static_cast<double>(k) + m.x0;
    const double i0 = std::floor(src);
    const double f = src - i0;
    up(static_cast<Eigen::Index>(k), clamp(i0)) += 1.0 - f;
    up(static_cast<Eigen::Index>(k), clamp(i0 + 1.0)) += f;
  }
  return up;
}

double ToyCodec::carrier(std::size_t k, std::size_t i, std::size_t j) const {
  const auto [a, b] = carriers_[k];
  const int parity = std::popcount(a & i) + std::popcount(b & j);
  return (parity & 1) ? -1.0 : 1.0;
}

void ToyCodec::encode_frame(std::span<const double> latent, std::span<double> pixels) const {
  const std::size_t hw = height_ * width_;
  const std::size_t mh = height_ * upsample_;
  const std::size_t mw = width_ * upsample_;
  const std::size_t mhw = mh * mw;
  const auto n = static_cast<Eigen::Index>(channels_);

  // Channel transform per latent position.
  std::vector<double> mixed(channels_ * hw);
  for (std::size_t p = 0; p < hw; ++p) {
    Eigen::VectorXd x(n);
    for (Eigen::Index c = 0; c < n; ++c) x(c) = latent[c * hw + p];
    const Eigen::VectorXd y = transform_ * x;
    for (Eigen::Index c = 0; c < n; ++c) mixed[c * hw + p] = y(c);
  }

  const auto map = upsample_map(upsample_);
  for (std::size_t c = 0; c < kMixedChannels; ++c) {
    kernels::resample_bilinear(std::span<const double>(mixed).subspan(c * hw, hw), height_, width_,
                               pixels.subspan(c * mhw, mhw), mh, mw, map, kernels::Border::kClamp);
  }

  const double luma = kDetailGain / std::sqrt(3.0);
  for (std::size_t k = 0; k + kMixedChannels < channels_; ++k) {
    const double* d = mixed.data() + (k + kMixedChannels) * hw;
    for (std::size_t y = 0; y < mh; ++y) {
      for (std::size_t x = 0; x < mw; ++x) {
        const double v = luma * d[(y / upsample_) * width_ + x / upsample_] *
                         carrier(k, y % upsample_, x % upsample_);
        for (std::size_t c = 0; c < kMixedChannels; ++c) pixels[c * mhw + y * mw + x] += v;
      }
    }
  }

  for (double& v : pixels) v = std::clamp(kOffset + kScale * v, 0.0, 255.0);
}

void ToyCodec::decode_frame(std::span<const double> pixels, std::span<double> latent) const {
  const std::size_t hw = height_ * width_;
  const std::size_t mh = height_ * upsample_;
  const std::size_t mw = width_ * upsample_;
  const std::size_t mhw = mh * mw;
  const auto u = static_cast<std::size_t>(upsample_);

  std::vector<double> lin(kMixedChannels * mhw);
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = (pixels[i] - kOffset) / kScale;

  std::vector<double> mixed(channels_ * hw, 0.0);
  const auto map = upsample_map(upsample_);
  std::vector<double> up(mhw);
  const double luma = kDetailGain / std::sqrt(3.0);
  const double norm = 1.0 / (kDetailGain * static_cast<double>(u * u));
  for (std::size_t c = 0; c < kMixedChannels; ++c) {
    Eigen::MatrixXd box = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(height_),
                                                static_cast<Eigen::Index>(width_));
    for (std::size_t y = 0; y < mh; ++y) {
      for (std::size_t x = 0; x < mw; ++x) {
        box(static_cast<Eigen::Index>(y / u), static_cast<Eigen::Index>(x / u)) += lin[c * mhw + y * mw + x];
      }
    }
    box /= static_cast<double>(u * u);
    const Eigen::MatrixXd base = inv_rows_ * box * inv_cols_.transpose();
    double* dst = mixed.data() + c * hw;
    for (std::size_t h = 0; h < height_; ++h) {
      for (std::size_t w = 0; w < width_; ++w) {
        dst[h * width_ + w] = base(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(w));
      }
    }
    kernels::resample_bilinear(std::span<const double>(dst, hw), height_, width_, up, mh, mw, map,
                               kernels::Border::kClamp);
    // Residual detail: correlate against each carrier along the luma direction.
    for (std::size_t k = 0; k + kMixedChannels < channels_; ++k) {
      double* d = mixed.data() + (k + kMixedChannels) * hw;
      for (std::size_t y = 0; y < mh; ++y) {
        for (std::size_t x = 0; x < mw; ++x) {
          const double r = lin[c * mhw + y * mw + x] - up[y * mw + x];
          d[(y / u) * width_ + x / u] += luma * norm * r * carrier(k, y % u, x % u);
        }
      }
    }
  }

  const auto n = static_cast<Eigen::Index>(channels_);
  for (std::size_t p = 0; p < hw; ++p) {
    Eigen::VectorXd y(n);
    for (Eigen::Index c = 0; c < n; ++c) y(c) = mixed[c * hw + p];
    const Eigen::VectorXd x = transform_.transpose() * y;
    for (Eigen::Index c = 0; c < n; ++c) latent[c * hw + p] = x(c);
  }
}

Tensor ToyCodec::encode(const Tensor& latent) const {
  const Shape& s = latent.shape();
  require(s.channels == channels_ && s.height == height_ && s.width == width_, ErrorKind::kShape,
          "toy_codec expects latent " + to_string(Shape{s.frames, channels_, height_, width_}) +
              ", got " + to_string(s));
  Tensor out(media_shape(s.frames));
  for (std::size_t t = 0; t < s.frames; ++t) encode_frame(latent.frame(t), out.frame(t));
  return out;
}

Tensor ToyCodec::decode(const Tensor& pixels) const {
  const Shape& s = pixels.shape();
  require(s == media_shape(s.frames), ErrorKind::kShape,
          "toy_codec expects media " + to_string(media_shape(s.frames)) + ", got " + to_string(s));
  Tensor out(Shape{s.frames, channels_, height_, width_});
  for (std::size_t t = 0; t < s.frames; ++t) decode_frame(pixels.frame(t), out.frame(t));
  return out;
}

double ToyCodec::lipschitz_bound() const {
  const double up = spectral_norm(upsample_matrix(height_)) * spectral_norm(upsample_matrix(width_));
  const double detail = kDetailGain * upsample_;
  return kScale * std::sqrt(up * up + detail * detail);
}

PoolOperator ToyCodec::pool_operator(std::size_t grid) const {
  const std::size_t mh = height_ * upsample_;
  const std::size_t mw = width_ * upsample_;
  require(grid > 0 && mh % grid == 0 && mw % grid == 0 && (mh / grid) % upsample_ == 0 &&
              (mw / grid) % upsample_ == 0,
          ErrorKind::kShape, "pool grid " + std::to_string(grid) + " incompatible with media " +
                                 std::to_string(mh) + "x" + std::to_string(mw));
  // Pool cells cover whole codec blocks, so every carrier averages out.
  return {kScale * mixing(), pool_matrix(grid, mh) * upsample_matrix(height_),
          pool_matrix(grid, mw) * upsample_matrix(width_)};
}

}  // namespace lmk
