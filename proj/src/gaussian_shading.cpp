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

std::string bits_to_hex(const Bits& bits) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int nib = 0;
    for (std::size_t k = 0; k < 4 && i + k < bits.size(); ++k) nib |= (bits[i + k] & 1) << (3 - k);
    out += kHex[nib];
  }
  return out;
}

Bits bits_from_hex(std::string_view hex, std::size_t count) {
  require(hex.size() == (count + 3) / 4, ErrorKind::kConfig,
          "bit string needs " + std::to_string((count + 3) / 4) + " hex digits, got " + std::to_string(hex.size()));
  Bits bits(count);
  for (std::size_t i = 0; i < count; ++i) {
    const char c = hex[i / 4];
    int nib = 0;
    if (c >= '0' && c <= '9') {
      nib = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      nib = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      nib = c - 'A' + 10;
    } else {
      fail(ErrorKind::kConfig, std::string("invalid hex digit '") + c + "' in bit string");
    }
    bits[i] = static_cast<std::uint8_t>((nib >> (3 - i % 4)) & 1);
  }
  return bits;
}

std::uint8_t cipher_bit(const Key256& key, std::uint64_t stream, std::size_t i) {
  return static_cast<std::uint8_t>(SeededRng(key, stream).u64_at(i) & 1);
}

namespace {

Bits cipher_bits(const Key256& key, std::uint64_t stream, std::size_t n) {
  std::vector<std::uint64_t> raw(n);
  SeededRng(key, stream).fill_u64(raw);
  Bits out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(raw[i] & 1);
  return out;
}

}  // namespace

double truncated_half_normal(std::uint8_t bit, double u) {
  return gaussian_ppf((static_cast<double>(bit) + u) / 2.0);
}

Shape GsKey::message_shape() const {
  return {1, shape.channels / replication[0], shape.height / replication[1], shape.width / replication[2]};
}

void gs_validate(const GsKey& key) {
  const Shape& s = key.shape;
  require_latent_shape(s);
  require(s.frames == 1, ErrorKind::kShape, "Gaussian Shading needs a single-frame latent");
  const auto& f = key.replication;
  require(f[0] > 0 && f[1] > 0 && f[2] > 0 && s.channels % f[0] == 0 && s.height % f[1] == 0 && s.width % f[2] == 0,
          ErrorKind::kConfig,
          "replication factors [" + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," + std::to_string(f[2]) +
              "] must divide latent " + to_string(s));
  require(key.message.size() == key.message_shape().size() && !key.message.empty(), ErrorKind::kConfig,
          "message length " + std::to_string(key.message.size()) + " does not match replication");
}

GsKey gs_generate_key(const Key256& key_root, const Shape& shape, std::array<std::size_t, 3> replication) {
  GsKey key;
  key.shape = shape;
  key.replication = replication;
  key.message.assign(1, 0);
  const auto& f = replication;
  require(f[0] > 0 && f[1] > 0 && f[2] > 0 && shape.channels % f[0] == 0 && shape.height % f[1] == 0 &&
              shape.width % f[2] == 0,
          ErrorKind::kConfig, "replication factors must divide latent " + to_string(shape));
  key.message = cipher_bits(derive_key(key_root, "message"), 0, key.message_shape().size());
  key.cipher_key = derive_key(key_root, "cipher");
  key.sample_key = derive_key(key_root, "sample");
  gs_validate(key);
  return key;
}

std::size_t gs_slot(const GsKey& key, std::size_t i) {
  const Shape& s = key.shape;
  const Shape m = key.message_shape();
  const std::size_t w = i % s.width;
  const std::size_t h = (i / s.width) % s.height;
  const std::size_t c = i / s.plane_size();
  return ((c % m.channels) * m.height + h % m.height) * m.width + w % m.width;
}

Tensor gs_embed(const GsKey& key, std::uint64_t sample_id) {
  gs_validate(key);
  const std::size_t n = key.shape.size();
  const Bits cipher = cipher_bits(key.cipher_key, 0, n);
  std::vector<double> u(n);
  SeededRng(key.sample_key, sample_id).fill_uniform(u);
  Tensor out(key.shape);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t s = key.message[gs_slot(key, i)] ^ cipher[i];
    out[i] = truncated_half_normal(s, u[i]);
  }
  return out;
}

BitDetection gs_detect(const GsKey& key, const Tensor& inverted) {
  gs_validate(key);
  require(inverted.shape() == key.shape, ErrorKind::kShape,
          "latent " + to_string(inverted.shape()) + " does not match Gaussian Shading key " + to_string(key.shape));
  const std::size_t n = key.shape.size();
  const std::size_t k = key.message.size();
  const Bits cipher = cipher_bits(key.cipher_key, 0, n);
  std::vector<std::size_t> ones(k, 0);
  std::vector<std::size_t> votes(k, 0);
  // Even splits fall back to the summed deciphered magnitudes, which are
  // independent of the message on unwatermarked input.
  std::vector<double> soft(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t s = inverted[i] >= 0.0 ? 1 : 0;
    const std::size_t j = gs_slot(key, i);
    const std::uint8_t plain = s ^ cipher[i];
    ones[j] += plain;
    ++votes[j];
    soft[j] += plain ? std::abs(inverted[i]) : -std::abs(inverted[i]);
  }
  BitDetection r;
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
