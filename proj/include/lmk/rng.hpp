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
#include <span>
#include <string>
#include <string_view>

#include "lmk/tensor.hpp"

namespace lmk {

using Key256 = std::array<std::uint32_t, 8>;

Key256 key_from_hex(std::string_view hex);
std::string key_to_hex(const Key256& key);

/// Keyed PRF: ChaCha20 cascade over the length-prefixed label. Distinct
/// labels give unlinkable subkeys of the same master.
Key256 derive_key(const Key256& master, std::string_view label);

/// Counter-based keyed generator. Every value is addressed by an index, so a
/// draw at (key, stream, i) is independent of evaluation order and thread.
class SeededRng {
 public:
  SeededRng(const Key256& key, std::uint64_t stream) : key_(key), stream_(stream) {}

  const Key256& key() const { return key_; }
  std::uint64_t stream() const { return stream_; }

  /// Raw ChaCha20 block for the given 64-bit block counter.
  std::array<std::uint32_t, 16> block(std::uint64_t counter) const;

  std::uint64_t u64_at(std::uint64_t index) const;
  /// Uniform in the open interval (0, 1).
  double uniform_at(std::uint64_t index) const;
  double normal_at(std::uint64_t index) const;

  void fill_u64(std::span<std::uint64_t> out, std::uint64_t offset = 0) const;
  void fill_uniform(std::span<double> out, std::uint64_t offset = 0) const;
  void fill_normal(std::span<double> out, std::uint64_t offset = 0) const;

  /// Same stream under a derived key.
  SeededRng sub(std::string_view label) const { return {derive_key(key_, label), stream_}; }
  SeededRng with_stream(std::uint64_t stream) const { return {key_, stream}; }

 private:
  Key256 key_;
  std::uint64_t stream_;
};

/// i.i.d. standard normal tensor, deterministic in (rng.key, rng.stream).
Tensor gaussian_latent(const SeededRng& rng, const Shape& shape);

/// Deterministic Fisher-Yates permutation of [0, n).
std::vector<std::size_t> keyed_permutation(const SeededRng& rng, std::size_t n);

}  // namespace lmk
