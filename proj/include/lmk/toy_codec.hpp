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

#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "lmk/tensor.hpp"

namespace lmk {

/// Linear latent-to-pixel-block map used by semantic projections. The pooled
/// media embedding of a latent x is mix * x along channels, rows * x along
/// height, cols * x along width (before the constant pixel offset).
struct PoolOperator {
  Eigen::MatrixXd mix;   // media channels x latent channels
  Eigen::MatrixXd rows;  // grid x latent height
  Eigen::MatrixXd cols;  // grid x latent width
};

/// Simulated VAE decoder/encoder pair.
///
/// Forward: a keyed orthogonal CxC matrix splits the latent into three mixed
/// channels (the orthonormal-row 3xC block) and C-3 detail coefficients. The
/// mixed channels are bilinearly upsampled by u; each detail coefficient is
/// written into its u x u pixel block as a zero-mean Walsh carrier along the
/// luminance direction. Pixels are then mapped affinely to [0, 255] with the
/// fixed +/-4 sigma scale and clamped.
///
/// Inverse: undo the affine map, box-downsample (carriers average to zero),
/// solve the known separable downsample-of-upsample operator exactly, read
/// the detail coefficients back by carrier correlation, and unmix with the
/// transpose of the orthogonal matrix. Without clamping or attacks the
/// round trip is exact to rounding.
class ToyCodec {
 public:
  static constexpr double kScale = 255.0 / 8.0;
  static constexpr double kOffset = 127.5;
  static constexpr double kDetailGain = 1.0;

  ToyCodec(std::size_t channels, std::size_t height, std::size_t width, int upsample,
           std::uint64_t seed);

  int upsample() const { return upsample_; }
  Shape media_shape(std::size_t frames) const;

  /// Pixel media for a (possibly multi-frame) latent.
  Tensor encode(const Tensor& latent) const;
  /// Noiseless latent estimate from pixel media.
  Tensor decode(const Tensor& pixels) const;

  /// Orthogonal channel transform; rows 0..2 are the mixing matrix.
  const Eigen::MatrixXd& transform() const { return transform_; }
  Eigen::MatrixXd mixing() const { return transform_.topRows(3); }

  /// 1-D bilinear upsampling operator (n*u x n).
  Eigen::MatrixXd upsample_matrix(std::size_t n) const;

  /// Upper bound on the Lipschitz constant of encode in the Euclidean norm.
  double lipschitz_bound() const;

  PoolOperator pool_operator(std::size_t grid) const;

 private:
  void encode_frame(std::span<const double> latent, std::span<double> pixels) const;
  void decode_frame(std::span<const double> pixels, std::span<double> latent) const;
  double carrier(std::size_t k, std::size_t i, std::size_t j) const;

  std::size_t channels_;
  std::size_t height_;
  std::size_t width_;
  int upsample_;
  Eigen::MatrixXd transform_;
  Eigen::MatrixXd inv_rows_;  // (down * up)^-1 along height
  Eigen::MatrixXd inv_cols_;
  std::vector<std::pair<std::size_t, std::size_t>> carriers_;
};

}  // namespace lmk
