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

#include "lmk/error.hpp"
#include "lmk/keybased.hpp"
#include "lmk/stats.hpp"

namespace lmk {
namespace {

// Orthogonal projector onto the row space of m.
Eigen::MatrixXd row_space_projector(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = sv.size() > 0 ? 1e-10 * sv(0) * static_cast<double>(std::max(m.rows(), m.cols())) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  const Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
  return v * v.transpose();
}

}  // namespace

SealScheme::SealScheme(SealKey key, const Shape& latent_shape, const PoolOperator& op)
    : key_(std::move(key)), shape_(latent_shape) {
  require_latent_shape(shape_);
  require(shape_.frames == 1, ErrorKind::kShape, "SEAL needs a single-frame latent");
  require(key_.provider == "avgpool", ErrorKind::kConfig, "unknown SEAL embedding provider '" + key_.provider + "'");
  require(key_.bits >= 1 && key_.bits <= 32, ErrorKind::kConfig, "SEAL hash bits must be in [1, 32]");
  require(key_.grid_h > 0 && key_.grid_w > 0 && shape_.height % key_.grid_h == 0 && shape_.width % key_.grid_w == 0,
          ErrorKind::kConfig, "SEAL patch grid must divide the latent plane " + to_string(shape_));
  require(key_.patch_threshold > -1.0 && key_.patch_threshold < 1.0, ErrorKind::kConfig,
          "SEAL patch threshold must be in (-1, 1)");
  require(key_.null_rate >= 0.0 && key_.null_rate < 1.0, ErrorKind::kConfig, "SEAL null rate must be in [0, 1)");
  require(op.mix.cols() == static_cast<Eigen::Index>(shape_.channels) &&
              op.rows.cols() == static_cast<Eigen::Index>(shape_.height) &&
              op.cols.cols() == static_cast<Eigen::Index>(shape_.width) &&
              op.rows.rows() == static_cast<Eigen::Index>(key_.pool) && op.cols.rows() == static_cast<Eigen::Index>(key_.pool),
          ErrorKind::kShape, "SEAL pooling operator does not match the latent geometry");
  proj_c_ = row_space_projector(op.mix);
  proj_h_ = row_space_projector(op.rows);
  proj_w_ = row_space_projector(op.cols);

  const auto dim = op.mix.rows() * static_cast<Eigen::Index>(key_.pool * key_.pool);
  const SeededRng rng(derive_key(key_.salt, "seal/hyperplanes"), 0);
  hyperplanes_.resize(static_cast<Eigen::Index>(key_.bits), dim);
  for (Eigen::Index b = 0; b < hyperplanes_.rows(); ++b) {
    for (Eigen::Index d = 0; d < dim; ++d) hyperplanes_(b, d) = rng.normal_at(static_cast<std::uint64_t>(b * dim + d));
    hyperplanes_.row(b).normalize();
  }
}

std::vector<double> SealScheme::embedding(const Media& media) const {
  const Shape& s = media.data.shape();
  const std::size_t p = key_.pool;
  require(s.frames == 1 && static_cast<Eigen::Index>(s.channels * p * p) == hyperplanes_.cols() && s.height % p == 0 &&
              s.width % p == 0,
          ErrorKind::kShape, "SEAL provider cannot pool media " + to_string(s));
  const std::size_t bh = s.height / p;
  const std::size_t bw = s.width / p;
  std::vector<double> v(s.channels * p * p, 0.0);
  for (std::size_t c = 0; c < s.channels; ++c) {
    for (std::size_t h = 0; h < s.height; ++h) {
      for (std::size_t w = 0; w < s.width; ++w) v[(c * p + h / bh) * p + w / bw] += media.data.at(0, c, h, w);
    }
  }
  double mean = 0.0;
  for (double& x : v) {
    x /= static_cast<double>(bh * bw);
    mean += x;
  }
  mean /= static_cast<double>(v.size());
  double norm = 0.0;
  for (double& x : v) {
    x -= mean;
    norm += x * x;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return v;
}

std::uint32_t SealScheme::hash(const std::vector<double>& embedding) const {
  require(static_cast<Eigen::Index>(embedding.size()) == hyperplanes_.cols(), ErrorKind::kShape,
          "SEAL embedding has the wrong dimension");
  const Eigen::Map<const Eigen::VectorXd> v(embedding.data(), static_cast<Eigen::Index>(embedding.size()));
  const Eigen::VectorXd proj = hyperplanes_ * v;
  std::uint32_t h = 0;
  for (Eigen::Index b = 0; b < proj.size(); ++b) {
    if (proj(b) >= 0.0) h |= 1u << b;
  }
  return h;
}

Tensor SealScheme::patch_noise(std::uint32_t hash) const {
  Tensor out(shape_);
  const std::size_t ph = shape_.height / key_.grid_h;
  const std::size_t pw = shape_.width / key_.grid_w;
  for (std::size_t gy = 0; gy < key_.grid_h; ++gy) {
    for (std::size_t gx = 0; gx < key_.grid_w; ++gx) {
      const std::size_t patch = gy * key_.grid_w + gx;
      const SeededRng rng(derive_key(key_.salt, "seal/patch/" + std::to_string(hash) + "/" + std::to_string(patch)), 0);
      std::uint64_t idx = 0;
      for (std::size_t c = 0; c < shape_.channels; ++c) {
        for (std::size_t h = gy * ph; h < (gy + 1) * ph; ++h) {
          for (std::size_t w = gx * pw; w < (gx + 1) * pw; ++w) out.at(0, c, h, w) = rng.normal_at(idx++);
        }
      }
    }
  }
  return out;
}

Tensor SealScheme::project_out(const Tensor& latent) const {
  require(latent.shape() == shape_, ErrorKind::kShape,
          "latent " + to_string(latent.shape()) + " does not match SEAL geometry " + to_string(shape_));
  const auto c = static_cast<Eigen::Index>(shape_.channels);
  const auto h = static_cast<Eigen::Index>(shape_.height);
  const auto w = static_cast<Eigen::Index>(shape_.width);
  // Projection onto the row space of mix (x) rows (x) cols, applied factor by factor.
  std::vector<Eigen::MatrixXd> planes(static_cast<std::size_t>(c), Eigen::MatrixXd::Zero(h, w));
  for (Eigen::Index a = 0; a < c; ++a) {
    for (Eigen::Index b = 0; b < c; ++b) {
      const double coef = proj_c_(a, b);
      if (coef == 0.0) continue;
      const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> src(
          latent.plane(0, static_cast<std::size_t>(b)).data(), h, w);
      planes[static_cast<std::size_t>(a)] += coef * src;
    }
  }
  Tensor out = latent;
  for (Eigen::Index a = 0; a < c; ++a) {
    const Eigen::MatrixXd p = proj_h_ * planes[static_cast<std::size_t>(a)] * proj_w_.transpose();
    auto dst = out.plane(0, static_cast<std::size_t>(a));
    for (Eigen::Index y = 0; y < h; ++y) {
      for (Eigen::Index x = 0; x < w; ++x) dst[static_cast<std::size_t>(y * w + x)] -= p(y, x);
    }
  }
  return out;
}

Tensor SealScheme::embed(const Tensor& reference_latent, std::uint32_t hash) const {
  const Tensor ref_out = project_out(reference_latent);
  const Tensor noise = patch_noise(hash);
  const Tensor noise_out = project_out(noise);
  // Pi x_ref + (I - Pi) z: Gaussian with identity covariance, same pooled media.
  Tensor out(shape_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = reference_latent[i] - ref_out[i] + noise_out[i];
  return out;
}

std::vector<double> SealScheme::patch_cosines(const Tensor& a, const Tensor& b) const {
  const std::size_t ph = shape_.height / key_.grid_h;
  const std::size_t pw = shape_.width / key_.grid_w;
  std::vector<double> cos(patches());
  for (std::size_t gy = 0; gy < key_.grid_h; ++gy) {
    for (std::size_t gx = 0; gx < key_.grid_w; ++gx) {
      double ab = 0.0, aa = 0.0, bb = 0.0;
      for (std::size_t c = 0; c < shape_.channels; ++c) {
        for (std::size_t h = gy * ph; h < (gy + 1) * ph; ++h) {
          for (std::size_t w = gx * pw; w < (gx + 1) * pw; ++w) {
            const double x = a.at(0, c, h, w);
            const double y = b.at(0, c, h, w);
            ab += x * y;
            aa += x * x;
            bb += y * y;
          }
        }
      }
      const double denom = std::sqrt(aa * bb);
      cos[gy * key_.grid_w + gx] = denom > 0.0 ? ab / denom : 0.0;
    }
  }
  return cos;
}

std::vector<double> SealScheme::patch_scores(const Tensor& inverted, std::uint32_t hash) const {
  return patch_cosines(project_out(inverted), project_out(patch_noise(hash)));
}

BitDetection SealScheme::detect(const Tensor& inverted, std::uint32_t hash) const {
  const auto cos = patch_scores(inverted, hash);
  BitDetection r;
  for (const double c : cos) r.matches += c > key_.patch_threshold ? 1 : 0;
  r.trials = cos.size();
  r.score = static_cast<double>(r.matches) / static_cast<double>(r.trials);
  r.p_value = binomial_tail_pvalue(r.trials, r.matches, key_.null_rate);
  return r;
}

double SealScheme::estimate_null_rate(std::size_t samples, const SeededRng& rng) const {
  require(samples > 0, ErrorKind::kConfig, "SEAL null calibration needs at least one sample");
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Tensor x = gaussian_latent(rng.with_stream(2 * s), shape_);
    const Tensor z = gaussian_latent(rng.with_stream(2 * s + 1), shape_);
    for (const double c : patch_cosines(project_out(x), project_out(z))) hits += c > key_.patch_threshold ? 1 : 0;
  }
  const double trials = static_cast<double>(samples * patches());
  return (static_cast<double>(hits) + 1.0) / (trials + 2.0);
}

}  // namespace lmk
