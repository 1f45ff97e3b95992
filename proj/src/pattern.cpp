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

#include "lmk/pattern.hpp"

#include <cmath>
#include <limits>

#include "lmk/error.hpp"

namespace lmk {
namespace {

void require_image_latent(const Tensor& latent, std::size_t channel) {
  const Shape& s = latent.shape();
  require(s.frames == 1, ErrorKind::kShape, "pattern methods need a single-frame latent, got " + to_string(s));
  require(channel < s.channels, ErrorKind::kShape,
          "pattern channel " + std::to_string(channel) + " outside latent " + to_string(s));
}

void require_radius(const Shape& shape, int radius) {
  const int limit = static_cast<int>(std::min(shape.height, shape.width) / 2) - 1;
  require(radius >= 0 && radius <= limit, ErrorKind::kDomain,
          "ring radius " + std::to_string(radius) + " outside [0, " + std::to_string(limit) + "]");
}

// Replaces masked cells of one plane's spectrum with a blend toward per-ring values.
void blend_plane(std::span<double> plane, std::size_t h, std::size_t w, const FourierMask& mask,
                 std::span<const double> ring_values, double lambda) {
  if (mask.count() == 0) return;
  SpectralPlane spec = fft2_centered(plane, h, w);
  for (const std::size_t idx : mask.members()) {
    const std::size_t i = idx / w;
    const std::size_t j = idx % w;
    const double v = ring_values[static_cast<std::size_t>(rounded_radius(i, j, h, w) - 1)];
    spec.data[idx] = (1.0 - lambda) * spec.data[idx] + lambda * Complex(v, 0.0);
  }
  const auto real = ifft2_centered_real(spec);
  std::copy(real.begin(), real.end(), plane.begin());
}

// Draws +/-amplitude ring vectors for `count` entries of `slots` planes each,
// rejecting candidates closer than min_sep to an accepted one.
std::vector<std::vector<std::vector<double>>> separated_sign_patterns(const SeededRng& rng, std::size_t count,
                                                                      std::size_t slots, int radius,
                                                                      double amplitude,
                                                                      std::span<const std::size_t> ring_cells,
                                                                      double min_sep) {
  std::vector<std::vector<std::vector<double>>> out;
  std::uint64_t cursor = 0;
  const std::size_t max_attempts = 1000 * (count + 1);
  for (std::size_t attempt = 0; out.size() < count; ++attempt) {
    require(attempt < max_attempts, ErrorKind::kConfig,
            "cannot draw " + std::to_string(count) + " separated ring patterns with radius " +
                std::to_string(radius));
    std::vector<std::vector<double>> cand(slots, std::vector<double>(static_cast<std::size_t>(radius)));
    for (auto& slot : cand) {
      for (auto& v : slot) v = (rng.u64_at(cursor++) & 1) ? amplitude : -amplitude;
    }
    bool ok = true;
    for (const auto& prev : out) {
      double d = 0.0;
      for (std::size_t s = 0; s < slots; ++s) {
        for (std::size_t r = 0; r < cand[s].size(); ++r) d += static_cast<double>(ring_cells[r]) * std::abs(cand[s][r] - prev[s][r]);
      }
      if (d < min_sep) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(cand));
  }
  return out;
}

std::vector<std::size_t> ring_cell_counts(const FourierMask& mask, int radius) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(radius), 0);
  for (const std::size_t idx : mask.members()) {
    ++counts[static_cast<std::size_t>(rounded_radius(idx / mask.width, idx % mask.width, mask.height, mask.width) - 1)];
  }
  return counts;
}

double min_ring_separation(std::span<const std::size_t> cells, double amplitude) {
  std::size_t smallest = std::numeric_limits<std::size_t>::max();
  for (const std::size_t c : cells) smallest = std::min(smallest, c);
  return cells.empty() ? 0.0 : 2.0 * amplitude * static_cast<double>(smallest);
}

}  // namespace

RingKey tr_generate_key(const SeededRng& rng, const Shape& shape, int radius, std::size_t channel) {
  require_latent_shape(shape);
  require_radius(shape, radius);
  require(channel < shape.channels, ErrorKind::kConfig,
          "watermark channel " + std::to_string(channel) + " outside latent " + to_string(shape));
  RingKey key;
  key.channel = channel;
  key.radius = radius;
  key.mask = ring_set_mask(shape.height, shape.width, radius);
  key.ring_values.assign(static_cast<std::size_t>(radius), 0.0);
  if (radius == 0) return key;

  std::vector<double> plane(shape.plane_size());
  rng.fill_normal(plane);
  const SpectralPlane spec = fft2_centered(plane, shape.height, shape.width);
  std::vector<Complex> sums(static_cast<std::size_t>(radius));
  std::vector<std::size_t> counts(static_cast<std::size_t>(radius), 0);
  for (const std::size_t idx : key.mask.members()) {
    const auto r = static_cast<std::size_t>(rounded_radius(idx / shape.width, idx % shape.width, shape.height, shape.width) - 1);
    sums[r] += spec.data[idx];
    ++counts[r];
  }
  // Rings are closed under the center rotation, so each average is real up
  // to rounding; the imaginary residue is dropped.
  for (std::size_t r = 0; r < sums.size(); ++r) key.ring_values[r] = sums[r].real() / static_cast<double>(counts[r]);
  return key;
}

RingKey tr_key_from_values(const Shape& shape, int radius, std::size_t channel, std::vector<double> ring_values) {
  require_latent_shape(shape);
  require_radius(shape, radius);
  require(channel < shape.channels, ErrorKind::kConfig,
          "watermark channel " + std::to_string(channel) + " outside latent " + to_string(shape));
  require(ring_values.size() == static_cast<std::size_t>(radius), ErrorKind::kConfig,
          "expected " + std::to_string(radius) + " ring values, got " + std::to_string(ring_values.size()));
  RingKey key;
  key.channel = channel;
  key.radius = radius;
  key.mask = ring_set_mask(shape.height, shape.width, radius);
  key.ring_values = std::move(ring_values);
  return key;
}

Tensor pattern_blend(const RingKey& key, const Tensor& latent, double lambda) {
  require_image_latent(latent, key.channel);
  const Shape& s = latent.shape();
  require(s.height == key.mask.height && s.width == key.mask.width, ErrorKind::kShape,
          "latent " + to_string(s) + " does not match the key geometry");
  Tensor out = latent;
  blend_plane(out.plane(0, key.channel), s.height, s.width, key.mask, key.ring_values, lambda);
  return out;
}

double ring_distance(const FourierMask& mask, std::span<const double> ring_values, std::span<const double> plane) {
  const std::size_t n = mask.count();
  if (n == 0) return 0.0;
  const SpectralPlane spec = fft2_centered(plane, mask.height, mask.width);
  double sum = 0.0;
  for (const std::size_t idx : mask.members()) {
    const auto r = static_cast<std::size_t>(rounded_radius(idx / mask.width, idx % mask.width, mask.height, mask.width) - 1);
    sum += std::abs(spec.data[idx] - Complex(ring_values[r], 0.0));
  }
  return sum / static_cast<double>(n);
}

double tr_distance(const RingKey& key, const Tensor& latent) {
  require_image_latent(latent, key.channel);
  require(latent.shape().height == key.mask.height && latent.shape().width == key.mask.width, ErrorKind::kShape,
          "latent " + to_string(latent.shape()) + " does not match the key geometry");
  return ring_distance(key.mask, key.ring_values, latent.plane(0, key.channel));
}

RingKeySet ri_generate_keyset(const SeededRng& rng, const Shape& shape, int radius,
                              std::vector<std::size_t> channels, std::size_t count, double amplitude) {
  require_latent_shape(shape);
  require(count > 0, ErrorKind::kConfig, "Ring-ID key set must be nonempty");
  require(!channels.empty(), ErrorKind::kConfig, "Ring-ID needs at least one carrier channel");
  require(radius > 0, ErrorKind::kConfig, "Ring-ID radius must be positive");
  require_radius(shape, radius);
  require(amplitude > 0.0, ErrorKind::kConfig, "Ring-ID amplitude must be positive");
  for (const auto c : channels) {
    require(c < shape.channels, ErrorKind::kConfig, "Ring-ID channel " + std::to_string(c) + " outside latent");
  }
  RingKeySet set;
  set.channels = std::move(channels);
  set.radius = radius;
  set.amplitude = amplitude;
  set.mask = ring_set_mask(shape.height, shape.width, radius);
  const auto cells = ring_cell_counts(set.mask, radius);
  set.min_separation = min_ring_separation(cells, amplitude);
  set.values = separated_sign_patterns(rng, count, set.channels.size(), radius, amplitude, cells, set.min_separation);
  return set;
}

RingKeySet ri_keyset_from_values(const Shape& shape, int radius, std::vector<std::size_t> channels, double amplitude,
                                 std::vector<std::vector<std::vector<double>>> values) {
  require_latent_shape(shape);
  require(!values.empty(), ErrorKind::kConfig, "Ring-ID key set must be nonempty");
  require(radius > 0, ErrorKind::kConfig, "Ring-ID radius must be positive");
  require_radius(shape, radius);
  for (const auto c : channels) {
    require(c < shape.channels, ErrorKind::kConfig, "Ring-ID channel " + std::to_string(c) + " outside latent");
  }
  for (const auto& key : values) {
    require(key.size() == channels.size(), ErrorKind::kConfig, "Ring-ID key has the wrong number of channel slots");
    for (const auto& slot : key) {
      require(slot.size() == static_cast<std::size_t>(radius), ErrorKind::kConfig,
              "Ring-ID key slot has the wrong number of rings");
    }
  }
  RingKeySet set;
  set.channels = std::move(channels);
  set.radius = radius;
  set.amplitude = amplitude;
  set.mask = ring_set_mask(shape.height, shape.width, radius);
  set.min_separation = min_ring_separation(ring_cell_counts(set.mask, radius), amplitude);
  set.values = std::move(values);
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      require(ri_key_distance(set, a, b) >= set.min_separation, ErrorKind::kConfig,
              "Ring-ID keys " + std::to_string(a) + " and " + std::to_string(b) + " are not separated");
    }
  }
  return set;
}

double ri_key_distance(const RingKeySet& set, std::size_t a, std::size_t b) {
  const auto cells = ring_cell_counts(set.mask, set.radius);
  double d = 0.0;
  for (std::size_t s = 0; s < set.channels.size(); ++s) {
    for (std::size_t r = 0; r < cells.size(); ++r) d += static_cast<double>(cells[r]) * std::abs(set.values[a][s][r] - set.values[b][s][r]);
  }
  return d;
}

Tensor ri_embed(const RingKeySet& set, std::size_t key_id, const Tensor& latent) {
  require(key_id < set.size(), ErrorKind::kDomain,
          "Ring-ID key " + std::to_string(key_id) + " outside set of " + std::to_string(set.size()));
  Tensor out = latent;
  for (std::size_t s = 0; s < set.channels.size(); ++s) {
    require_image_latent(latent, set.channels[s]);
    blend_plane(out.plane(0, set.channels[s]), latent.shape().height, latent.shape().width, set.mask,
                set.values[key_id][s], 1.0);
  }
  return out;
}

Identification ri_identify(const RingKeySet& set, const Tensor& inverted) {
  require(set.size() > 0, ErrorKind::kDomain, "Ring-ID identification over an empty key set");
  const Shape& s = inverted.shape();
  require(s.height == set.mask.height && s.width == set.mask.width, ErrorKind::kShape,
          "latent " + to_string(s) + " does not match the key geometry");
  // Spectra are shared across keys; compute each carrier channel once.
  std::vector<SpectralPlane> spectra;
  for (const auto c : set.channels) {
    require_image_latent(inverted, c);
    spectra.push_back(fft2_centered(inverted.plane(0, c), s.height, s.width));
  }
  const auto members = set.mask.members();
  std::vector<std::size_t> ring_of(members.size());
  for (std::size_t m = 0; m < members.size(); ++m) {
    ring_of[m] = static_cast<std::size_t>(rounded_radius(members[m] / s.width, members[m] % s.width, s.height, s.width) - 1);
  }
  Identification id;
  id.distances.resize(set.size());
  for (std::size_t k = 0; k < set.size(); ++k) {
    double total = 0.0;
    for (std::size_t c = 0; c < spectra.size(); ++c) {
      double sum = 0.0;
      for (std::size_t m = 0; m < members.size(); ++m) {
        sum += std::abs(spectra[c].data[members[m]] - Complex(set.values[k][c][ring_of[m]], 0.0));
      }
      total += members.empty() ? 0.0 : sum / static_cast<double>(members.size());
    }
    id.distances[k] = total;
    if (k == 0 || total < id.score) {
      id.score = total;
      id.key_id = k;
    }
  }
  return id;
}

WindKey wind_generate_key(const SeededRng& rng, const Key256& noise_key, const Shape& shape,
                          std::size_t num_seeds, std::size_t groups, int radius, std::size_t channel,
                          double amplitude) {
  require_latent_shape(shape);
  require(shape.frames == 1, ErrorKind::kShape, "WIND needs a single-frame latent");
  require(num_seeds > 0 && groups > 0 && groups <= num_seeds, ErrorKind::kConfig,
          "WIND needs 0 < groups <= num_seeds");
  require(radius > 0, ErrorKind::kConfig, "WIND radius must be positive");
  require_radius(shape, radius);
  require(channel < shape.channels, ErrorKind::kConfig, "WIND channel outside latent");
  require(amplitude > 0.0, ErrorKind::kConfig, "WIND amplitude must be positive");
  WindKey key;
  key.shape = shape;
  key.num_seeds = num_seeds;
  key.groups = groups;
  key.channel = channel;
  key.radius = radius;
  key.amplitude = amplitude;
  key.noise_key = noise_key;
  key.mask = ring_set_mask(shape.height, shape.width, radius);
  const auto cells = ring_cell_counts(key.mask, radius);
  const auto pats = separated_sign_patterns(rng, groups, 1, radius, amplitude, cells, min_ring_separation(cells, amplitude));
  for (const auto& p : pats) key.group_values.push_back(p[0]);
  return key;
}

WindKey wind_key_from_values(const Key256& noise_key, const Shape& shape, std::size_t num_seeds, int radius,
                             std::size_t channel, double amplitude, std::vector<std::vector<double>> group_values) {
  require_latent_shape(shape);
  require(shape.frames == 1, ErrorKind::kShape, "WIND needs a single-frame latent");
  const std::size_t groups = group_values.size();
  require(num_seeds > 0 && groups > 0 && groups <= num_seeds, ErrorKind::kConfig,
          "WIND needs 0 < groups <= num_seeds");
  require(radius > 0, ErrorKind::kConfig, "WIND radius must be positive");
  require_radius(shape, radius);
  require(channel < shape.channels, ErrorKind::kConfig, "WIND channel outside latent");
  for (const auto& g : group_values) {
    require(g.size() == static_cast<std::size_t>(radius), ErrorKind::kConfig,
            "WIND group pattern has the wrong number of rings");
  }
  WindKey key;
  key.shape = shape;
  key.num_seeds = num_seeds;
  key.groups = groups;
  key.channel = channel;
  key.radius = radius;
  key.amplitude = amplitude;
  key.noise_key = noise_key;
  key.mask = ring_set_mask(shape.height, shape.width, radius);
  key.group_values = std::move(group_values);
  return key;
}

Tensor wind_base_noise(const WindKey& key, std::size_t seed) {
  require(seed < key.num_seeds, ErrorKind::kDomain,
          "WIND seed " + std::to_string(seed) + " outside bank of " + std::to_string(key.num_seeds));
  return gaussian_latent(SeededRng(key.noise_key, seed), key.shape);
}

Tensor wind_embed(const WindKey& key, std::size_t seed) {
  Tensor noise = wind_base_noise(key, seed);
  blend_plane(noise.plane(0, key.channel), key.shape.height, key.shape.width, key.mask,
              key.group_values[key.group_of(seed)], 1.0);
  return noise;
}

WindMatch wind_detect(const WindKey& key, const Tensor& inverted) {
  require(inverted.shape() == key.shape, ErrorKind::kShape,
          "latent " + to_string(inverted.shape()) + " does not match WIND key " + to_string(key.shape));
  const Shape& s = key.shape;
  WindMatch best;
  const SpectralPlane spec = fft2_centered(inverted.plane(0, key.channel), s.height, s.width);
  const auto members = key.mask.members();
  double x_norm = 0.0;
  for (const auto idx : members) x_norm += std::norm(spec.data[idx]);
  x_norm = std::sqrt(x_norm);
  best.group_correlations.resize(key.groups);
  for (std::size_t g = 0; g < key.groups; ++g) {
    double dotp = 0.0;
    double p_norm = 0.0;
    for (const auto idx : members) {
      const double v = key.group_values[g][static_cast<std::size_t>(rounded_radius(idx / s.width, idx % s.width, s.height, s.width) - 1)];
      dotp += v * spec.data[idx].real();
      p_norm += v * v;
    }
    const double denom = std::sqrt(p_norm) * x_norm;
    best.group_correlations[g] = denom > 0.0 ? dotp / denom : 0.0;
    if (best.group_correlations[g] > best.group_correlations[best.group]) best.group = g;
  }
  bool first = true;
  for (std::size_t seed = best.group; seed < key.num_seeds; seed += key.groups) {
    const Tensor cand = wind_embed(key, seed);
    const double c = cosine_similarity(cand.data(), inverted.data());
    if (first || c > best.score) {
      best.score = c;
      best.seed = seed;
      first = false;
    }
  }
  return best;
}

}  // namespace lmk
