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
#include <vector>

#include "lmk/rng.hpp"
#include "lmk/spectral.hpp"
#include "lmk/tensor.hpp"

namespace lmk {

/// Ring-constant spectral pattern on one latent channel. ring_values[r - 1]
/// is the value on ring r; values are real, so the patterned spectrum stays
/// conjugate-symmetric.
struct RingKey {
  std::size_t channel = 0;
  int radius = 0;
  std::vector<double> ring_values;
  FourierMask mask;
};

/// Ring averages of the spectrum of a fresh Gaussian plane drawn from `rng`.
RingKey tr_generate_key(const SeededRng& rng, const Shape& shape, int radius, std::size_t channel);

/// Rebuilds a key from stored ring values (e.g. a serialized key).
RingKey tr_key_from_values(const Shape& shape, int radius, std::size_t channel, std::vector<double> ring_values);

/// Masked cells of the key channel become (1 - lambda) * X + lambda * pattern.
Tensor pattern_blend(const RingKey& key, const Tensor& latent, double lambda);
inline Tensor tr_embed(const RingKey& key, const Tensor& latent) { return pattern_blend(key, latent, 1.0); }

/// Mean complex modulus |X - pattern| over masked cells (0 for an empty mask).
double tr_distance(const RingKey& key, const Tensor& latent);

/// Per-ring values for one plane, compared on a shared mask.
double ring_distance(const FourierMask& mask, std::span<const double> ring_values, std::span<const double> plane);

/// N multi-channel ring keys with +/-amplitude values per ring, pairwise
/// separated by at least min_separation in summed L1 over all masked cells.
struct RingKeySet {
  std::vector<std::size_t> channels;
  int radius = 0;
  double amplitude = 0.0;
  double min_separation = 0.0;
  FourierMask mask;
  std::vector<std::vector<std::vector<double>>> values;  // [key][channel slot][ring - 1]

  std::size_t size() const { return values.size(); }
};

RingKeySet ri_generate_keyset(const SeededRng& rng, const Shape& shape, int radius,
                              std::vector<std::size_t> channels, std::size_t count, double amplitude);

/// Rebuilds a set from stored values; checks the pairwise separation again.
RingKeySet ri_keyset_from_values(const Shape& shape, int radius, std::vector<std::size_t> channels, double amplitude,
                                 std::vector<std::vector<std::vector<double>>> values);

/// Summed-over-cells L1 distance between two keys of a set.
double ri_key_distance(const RingKeySet& set, std::size_t a, std::size_t b);

Tensor ri_embed(const RingKeySet& set, std::size_t key_id, const Tensor& latent);

struct Identification {
  std::size_t key_id = 0;
  double score = 0.0;               // summed per-channel mean distance of the best key
  std::vector<double> distances;    // per key
};

Identification ri_identify(const RingKeySet& set, const Tensor& inverted);

/// Grouped noise bank: seed j belongs to group j mod G; each group has a
/// +/-amplitude ring pattern imprinted on `channel`.
struct WindKey {
  Shape shape;
  std::size_t num_seeds = 0;
  std::size_t groups = 0;
  std::size_t channel = 0;
  int radius = 0;
  double amplitude = 0.0;
  FourierMask mask;
  std::vector<std::vector<double>> group_values;  // [group][ring - 1]
  Key256 noise_key{};

  std::size_t group_of(std::size_t seed) const { return seed % groups; }
};

WindKey wind_generate_key(const SeededRng& rng, const Key256& noise_key, const Shape& shape,
                          std::size_t num_seeds, std::size_t groups, int radius, std::size_t channel,
                          double amplitude);

WindKey wind_key_from_values(const Key256& noise_key, const Shape& shape, std::size_t num_seeds, int radius,
                             std::size_t channel, double amplitude, std::vector<std::vector<double>> group_values);

/// Stored Gaussian noise for a seed, before the group pattern.
Tensor wind_base_noise(const WindKey& key, std::size_t seed);
/// Watermarked initial noise for a seed.
Tensor wind_embed(const WindKey& key, std::size_t seed);

struct WindMatch {
  std::size_t group = 0;
  std::size_t seed = 0;
  double score = 0.0;                      // best cosine similarity
  std::vector<double> group_correlations;  // stage 1
};

WindMatch wind_detect(const WindKey& key, const Tensor& inverted);

}  // namespace lmk
