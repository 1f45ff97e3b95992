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

#include "lmk/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lmk/error.hpp"

namespace lmk {
namespace {

constexpr std::uint32_t rotl(std::uint32_t v, int n) { return (v << n) | (v >> (32 - n)); }

inline void quarter_round(std::array<std::uint32_t, 16>& x, int a, int b, int c, int d) {
  x[a] += x[b]; x[d] = rotl(x[d] ^ x[a], 16);
  x[c] += x[d]; x[b] = rotl(x[b] ^ x[c], 12);
  x[a] += x[b]; x[d] = rotl(x[d] ^ x[a], 8);
  x[c] += x[d]; x[b] = rotl(x[b] ^ x[c], 7);
}

std::array<std::uint32_t, 16> chacha20_block(const Key256& key, std::uint64_t counter,
                                             std::uint64_t nonce) {
  std::array<std::uint32_t, 16> in{0x61707865u, 0x3320646eu, 0x79622d32u, 0x6b206574u};
  for (int i = 0; i < 8; ++i) in[4 + i] = key[i];
  in[12] = static_cast<std::uint32_t>(counter);
  in[13] = static_cast<std::uint32_t>(counter >> 32);
  in[14] = static_cast<std::uint32_t>(nonce);
  in[15] = static_cast<std::uint32_t>(nonce >> 32);
  auto x = in;
  for (int round = 0; round < 10; ++round) {
    quarter_round(x, 0, 4, 8, 12);
    quarter_round(x, 1, 5, 9, 13);
    quarter_round(x, 2, 6, 10, 14);
    quarter_round(x, 3, 7, 11, 15);
    quarter_round(x, 0, 5, 10, 15);
    quarter_round(x, 1, 6, 11, 12);
    quarter_round(x, 2, 7, 8, 13);
    quarter_round(x, 3, 4, 9, 14);
  }
  for (int i = 0; i < 16; ++i) x[i] += in[i];
  return x;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline double to_unit_open(std::uint64_t v) {
  return (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

Key256 key_from_hex(std::string_view hex) {
  require(hex.size() == 64, ErrorKind::kConfig,
          "key must be 64 hex characters, got " + std::to_string(hex.size()));
  Key256 key{};
  for (std::size_t w = 0; w < 8; ++w) {
    std::uint32_t v = 0;
    // Little-endian words, two hex digits per byte.
    for (int b = 0; b < 4; ++b) {
      const int hi = hex_value(hex[w * 8 + b * 2]);
      const int lo = hex_value(hex[w * 8 + b * 2 + 1]);
      require(hi >= 0 && lo >= 0, ErrorKind::kConfig, "key contains a non-hex character");
      v |= static_cast<std::uint32_t>(hi * 16 + lo) << (8 * b);
    }
    key[w] = v;
  }
  return key;
}

std::string key_to_hex(const Key256& key) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint32_t w : key) {
    for (int b = 0; b < 4; ++b) {
      const auto byte = static_cast<std::uint8_t>(w >> (8 * b));
      out.push_back(kDigits[byte >> 4]);
      out.push_back(kDigits[byte & 15]);
    }
  }
  return out;
}

Key256 derive_key(const Key256& master, std::string_view label) {
  auto absorb = [](const Key256& k, std::uint64_t chunk) {
    const auto block = chacha20_block(k, 0, chunk);
    Key256 next{};
    for (int i = 0; i < 8; ++i) next[i] = block[i];
    return next;
  };
  Key256 state = absorb(master, 0x6c6d6b2d64657276ull ^ label.size());
  for (std::size_t pos = 0; pos < label.size(); pos += 8) {
    std::uint64_t chunk = 0;
    for (std::size_t i = 0; i < 8 && pos + i < label.size(); ++i) {
      chunk |= static_cast<std::uint64_t>(static_cast<unsigned char>(label[pos + i])) << (8 * i);
    }
    state = absorb(state, chunk);
  }
  return state;
}

std::array<std::uint32_t, 16> SeededRng::block(std::uint64_t counter) const {
  return chacha20_block(key_, counter, stream_);
}

std::uint64_t SeededRng::u64_at(std::uint64_t index) const {
  const auto b = block(index / 8);
  const std::size_t w = (index % 8) * 2;
  return static_cast<std::uint64_t>(b[w]) | (static_cast<std::uint64_t>(b[w + 1]) << 32);
}

double SeededRng::uniform_at(std::uint64_t index) const { return to_unit_open(u64_at(index)); }

double SeededRng::normal_at(std::uint64_t index) const {
  const std::uint64_t pair = index / 2;
  const double u1 = uniform_at(2 * pair);
  const double u2 = uniform_at(2 * pair + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (index % 2 == 0) ? r * std::cos(angle) : r * std::sin(angle);
}

void SeededRng::fill_u64(std::span<std::uint64_t> out, std::uint64_t offset) const {
  std::size_t i = 0;
  while (i < out.size()) {
    const std::uint64_t idx = offset + i;
    const auto b = block(idx / 8);
    for (std::uint64_t w = idx % 8; w < 8 && i < out.size(); ++w, ++i) {
      out[i] = static_cast<std::uint64_t>(b[2 * w]) | (static_cast<std::uint64_t>(b[2 * w + 1]) << 32);
    }
  }
}

void SeededRng::fill_uniform(std::span<double> out, std::uint64_t offset) const {
  std::vector<std::uint64_t> raw(out.size());
  fill_u64(raw, offset);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = to_unit_open(raw[i]);
}

void SeededRng::fill_normal(std::span<double> out, std::uint64_t offset) const {
  // Box-Muller over aligned pairs so that out[i] == normal_at(offset + i).
  const std::uint64_t first_pair = offset / 2;
  const std::uint64_t last_pair = (offset + out.size() + 1) / 2;
  std::vector<double> u(2 * (last_pair - first_pair));
  fill_uniform(u, 2 * first_pair);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t idx = offset + i;
    const std::size_t p = static_cast<std::size_t>(idx / 2 - first_pair);
    const double r = std::sqrt(-2.0 * std::log(u[2 * p]));
    const double angle = 2.0 * std::numbers::pi * u[2 * p + 1];
    out[i] = (idx % 2 == 0) ? r * std::cos(angle) : r * std::sin(angle);
  }
}

Tensor gaussian_latent(const SeededRng& rng, const Shape& shape) {
  Tensor t(shape);
  rng.fill_normal(t.data());
  return t;
}

std::vector<std::size_t> keyed_permutation(const SeededRng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  if (n < 2) return perm;
  std::vector<std::uint64_t> raw(n);
  rng.fill_u64(raw);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(raw[i] % (i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace lmk
