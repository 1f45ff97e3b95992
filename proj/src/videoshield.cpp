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

Bits stream_bits(const Key256& key, std::uint64_t stream, std::size_t n) {
  std::vector<std::uint64_t> raw(n);
  SeededRng(key, stream).fill_u64(raw);
  Bits out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(raw[i] & 1);
  return out;
}

// Payload bit carried by `slot` of a frame whose index is `index`.
std::uint8_t payload_bit(const VsKey& key, std::size_t index, std::size_t slot) {
  const std::size_t m = key.frame_message_bits();
  if (slot < m) return key.message[(index % key.temporal) * m + slot];
  const std::size_t b = slot - m;
  return static_cast<std::uint8_t>((index >> (key.index_bits - 1 - b)) & 1);
}

}  // namespace

void vs_validate(const VsKey& key) {
  const Shape& s = key.shape;
  require_latent_shape(s);
  require(key.index_bits >= 1 && key.index_bits <= 32, ErrorKind::kConfig, "frame index bits must be in [1, 32]");
  require(s.frames <= (std::size_t{1} << key.index_bits), ErrorKind::kConfig,
          std::to_string(s.frames) + " frames exceed the capacity of " + std::to_string(key.index_bits) + " index bits");
  require(key.temporal >= 1 && s.frames % key.temporal == 0, ErrorKind::kConfig,
          "temporal replication must divide the frame count");
  require(!key.message.empty() && key.message.size() % key.temporal == 0, ErrorKind::kConfig,
          "message length must be a positive multiple of the temporal replication");
  require(key.payload_bits() <= s.frame_size(), ErrorKind::kConfig,
          "per-frame payload of " + std::to_string(key.payload_bits()) + " bits exceeds the frame latent");
  require(key.frame_threshold >= 0.0 && key.frame_threshold <= 1.0, ErrorKind::kConfig,
          "frame threshold must be in [0, 1]");
}

VsKey vs_generate_key(const Key256& key_root, const Shape& shape, std::size_t message_bits, std::size_t index_bits,
                      std::size_t temporal, double frame_threshold) {
  VsKey key;
  key.shape = shape;
  key.index_bits = index_bits;
  key.temporal = temporal;
  key.frame_threshold = frame_threshold;
  key.message = stream_bits(derive_key(key_root, "message"), 0, message_bits);
  key.cipher_key = derive_key(key_root, "cipher");
  key.index_key = derive_key(key_root, "index");
  key.sample_key = derive_key(key_root, "sample");
  vs_validate(key);
  return key;
}

Tensor vs_embed(const VsKey& key, std::uint64_t sample_id) {
  vs_validate(key);
  const std::size_t n = key.shape.frame_size();
  const std::size_t p = key.payload_bits();
  const std::size_t m = key.frame_message_bits();
  const Bits index_cipher = stream_bits(key.index_key, 0, n);
  const SeededRng uniform(key.sample_key, sample_id);
  Tensor out(key.shape);
  std::vector<double> u(n);
  for (std::size_t t = 0; t < key.shape.frames; ++t) {
    const Bits cipher = stream_bits(key.cipher_key, t, n);
    uniform.fill_uniform(u, t * n);
    auto frame = out.frame(t);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t slot = i % p;
      const std::uint8_t c = slot < m ? cipher[i] : index_cipher[i];
      frame[i] = truncated_half_normal(payload_bit(key, t, slot) ^ c, u[i]);
    }
  }
  return out;
}

BitDetection vs_detect(const VsKey& key, const Tensor& inverted) {
  vs_validate(key);
  require(inverted.shape() == key.shape, ErrorKind::kShape,
          "latent " + to_string(inverted.shape()) + " does not match VideoShield key " + to_string(key.shape));
  const std::size_t frames = key.shape.frames;
  const std::size_t n = key.shape.frame_size();
  const std::size_t p = key.payload_bits();
  const std::size_t m = key.frame_message_bits();
  const std::size_t k = key.message.size();
  const Bits index_cipher = stream_bits(key.index_key, 0, n);

  BitDetection r;
  std::vector<std::size_t> ones(k, 0);
  std::vector<std::size_t> votes(k, 0);
  // Even splits fall back to summed deciphered magnitudes (see gs_detect).
  std::vector<double> soft(k, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto frame = inverted.frame(t);
    // Frame index from the shared-cipher slots.
    std::vector<std::size_t> idx_ones(key.index_bits, 0);
    std::vector<std::size_t> idx_votes(key.index_bits, 0);
    std::vector<double> idx_soft(key.index_bits, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t slot = i % p;
      if (slot < m) continue;
      const std::uint8_t s = frame[i] >= 0.0 ? 1 : 0;
      const std::uint8_t plain = s ^ index_cipher[i];
      idx_ones[slot - m] += plain;
      ++idx_votes[slot - m];
      idx_soft[slot - m] += plain ? std::abs(frame[i]) : -std::abs(frame[i]);
    }
    std::size_t index = 0;
    for (std::size_t b = 0; b < key.index_bits; ++b) {
      const std::uint8_t bit = 2 * idx_ones[b] > idx_votes[b] ? 1 : 2 * idx_ones[b] < idx_votes[b] ? 0 : idx_soft[b] > 0.0;
      index = (index << 1) | bit;
    }
    r.frame_indices.push_back(index);
    // An impossible index still gets scored, against this position's cipher.
    const std::size_t as = index < frames ? index : t;
    const Bits cipher = stream_bits(key.cipher_key, as, n);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t slot = i % p;
      const std::uint8_t s = frame[i] >= 0.0 ? 1 : 0;
      const std::uint8_t c = slot < m ? cipher[i] : index_cipher[i];
      const std::uint8_t plain = s ^ c;
      if (slot < m) {
        const std::size_t bit = (as % key.temporal) * m + slot;
        ones[bit] += plain;
        ++votes[bit];
        soft[bit] += plain ? std::abs(frame[i]) : -std::abs(frame[i]);
        agree += plain == key.message[bit];
      } else {
        agree += plain == payload_bit(key, index, slot);
      }
    }
    const double acc = static_cast<double>(agree) / static_cast<double>(n);
    r.frame_accuracies.push_back(acc);
    if (index != t || acc < key.frame_threshold) r.tampered_frames.push_back(t);
  }
  r.bits.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    r.bits[j] = 2 * ones[j] > votes[j] ? 1 : 2 * ones[j] < votes[j] ? 0 : soft[j] > 0.0;
    r.matches += r.bits[j] == key.message[j];
  }
  r.trials = k;
  r.score = static_cast<double>(r.matches) / static_cast<double>(k);
  r.p_value = binomial_tail_pvalue(k, r.matches);
  return r;
}

}  // namespace lmk
