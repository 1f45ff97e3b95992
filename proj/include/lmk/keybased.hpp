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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lmk/channel.hpp"
#include "lmk/rng.hpp"
#include "lmk/tensor.hpp"

namespace lmk {

using Bits = std::vector<std::uint8_t>;

std::string bits_to_hex(const Bits& bits);
Bits bits_from_hex(std::string_view hex, std::size_t count);

/// Outcome of a bit- or check-counting detector.
struct BitDetection {
  Bits bits;                   // recovered message (empty for PRC/SEAL)
  std::size_t matches = 0;     // matching bits, satisfied checks or matching patches
  std::size_t trials = 0;
  double score = 0.0;          // matches / trials
  double p_value = 1.0;
  std::vector<double> frame_accuracies;
  std::vector<std::size_t> frame_indices;     // decoded index per frame position
  std::vector<std::size_t> tampered_frames;
};

// Gaussian Shading -----------------------------------------------------------

struct GsKey {
  Shape shape;
  std::array<std::size_t, 3> replication{1, 1, 1};  // channel, height, width
  Bits message;
  Key256 cipher_key{};
  Key256 sample_key{};

  Shape message_shape() const;
};

/// Message and streams drawn from subkeys of `key_root`.
GsKey gs_generate_key(const Key256& key_root, const Shape& shape, std::array<std::size_t, 3> replication);
void gs_validate(const GsKey& key);

/// Message index carried by flat latent position i (tiled replication).
std::size_t gs_slot(const GsKey& key, std::size_t i);
/// Keyed cipher bit for latent position i.
std::uint8_t cipher_bit(const Key256& key, std::uint64_t stream, std::size_t i);

/// Bit s in {0, 1} and uniform u in (0, 1) to a standard normal in the matching half.
double truncated_half_normal(std::uint8_t bit, double u);

Tensor gs_embed(const GsKey& key, std::uint64_t sample_id);
BitDetection gs_detect(const GsKey& key, const Tensor& inverted);

// PRC ------------------------------------------------------------------------

struct PrcKey {
  Shape shape;
  std::size_t check_size = 3;
  std::vector<std::vector<std::size_t>> checks;  // ascending; last entry is the pivot
  Key256 sign_key{};

  std::size_t length() const { return shape.size(); }
};

PrcKey prc_generate_key(const SeededRng& rng, const Key256& sign_key, const Shape& shape, std::size_t checks,
                        std::size_t check_size);
void prc_validate(const PrcKey& key);

Tensor prc_embed(const PrcKey& key, std::uint64_t sample_id);
BitDetection prc_detect(const PrcKey& key, const Tensor& inverted);

// SEAL -----------------------------------------------------------------------

struct SealKey {
  Key256 salt{};
  std::size_t bits = 16;
  std::size_t grid_h = 4;
  std::size_t grid_w = 4;
  std::size_t pool = 8;
  double patch_threshold = 0.3;
  double null_rate = 0.0;
  std::string provider = "avgpool";
};

/// Semantic-hash scheme bound to a latent geometry and a pooled media operator.
class SealScheme {
 public:
  SealScheme(SealKey key, const Shape& latent_shape, const PoolOperator& op);

  const SealKey& key() const { return key_; }
  void set_null_rate(double rate) { key_.null_rate = rate; }

  /// Mean-free, unit-norm average pool of the media (the embedding provider).
  std::vector<double> embedding(const Media& media) const;
  std::uint32_t hash(const std::vector<double>& embedding) const;
  std::uint32_t hash(const Media& media) const { return hash(embedding(media)); }

  /// Keeps the pooled-media component of the reference latent (so its hash
  /// is preserved) and fills the rest from hash-seeded patch noise.
  Tensor embed(const Tensor& reference_latent, std::uint32_t hash) const;
  BitDetection detect(const Tensor& inverted, std::uint32_t hash) const;
  /// Per-patch cosine between the projected latent and the hash-seeded noise.
  std::vector<double> patch_scores(const Tensor& inverted, std::uint32_t hash) const;

  /// Per-patch null match rate from simulated independent latents (Laplace smoothed).
  double estimate_null_rate(std::size_t samples, const SeededRng& rng) const;

  std::size_t patches() const { return key_.grid_h * key_.grid_w; }
  Tensor patch_noise(std::uint32_t hash) const;
  /// Orthogonal complement of the pooled-media row space.
  Tensor project_out(const Tensor& latent) const;
  const Eigen::MatrixXd& hyperplanes() const { return hyperplanes_; }

 private:
  std::vector<double> patch_cosines(const Tensor& a, const Tensor& b) const;

  SealKey key_;
  Shape shape_;
  Eigen::MatrixXd proj_c_;
  Eigen::MatrixXd proj_h_;
  Eigen::MatrixXd proj_w_;
  Eigen::MatrixXd hyperplanes_;  // bits x embedding dim
};

// VideoShield ----------------------------------------------------------------

struct VsKey {
  Shape shape;                   // T x C x H x W
  Bits message;
  std::size_t index_bits = 3;
  std::size_t temporal = 1;      // frames per full copy of the message
  double frame_threshold = 0.8;  // raw per-frame bit accuracy below this flags the frame
  Key256 cipher_key{};
  Key256 index_key{};
  Key256 sample_key{};

  std::size_t frame_message_bits() const { return message.size() / temporal; }
  std::size_t payload_bits() const { return frame_message_bits() + index_bits; }
};

VsKey vs_generate_key(const Key256& key_root, const Shape& shape, std::size_t message_bits,
                      std::size_t index_bits, std::size_t temporal, double frame_threshold);
void vs_validate(const VsKey& key);

Tensor vs_embed(const VsKey& key, std::uint64_t sample_id);
BitDetection vs_detect(const VsKey& key, const Tensor& inverted);

}  // namespace lmk
