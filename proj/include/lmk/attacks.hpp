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
#include <string>
#include <vector>

#include "lmk/channel.hpp"

namespace lmk {

enum class AttackKind {
  kRotation,
  kCropScale,
  kGaussianNoise,
  kGaussianBlur,
  kJpeg,
  kColorJitter,
  kFrameAverage,
  kFrameSwap,
  kMpegProxy,
};

/// One media edit. Parameters are positional per kind:
///   rotation(deg) crop_scale(ratio) gaussian_noise(sigma) gaussian_blur(k, sigma)
///   jpeg(q) color_jitter(brightness, contrast, saturation) frame_average(w)
///   frame_swap(count) or frame_swap(pairs a-b) mpeg_proxy(q, keyframe_interval)
struct AttackSpec {
  AttackKind kind = AttackKind::kJpeg;
  std::vector<double> params;
  std::vector<std::pair<std::size_t, std::size_t>> swap_pairs;

  friend bool operator==(const AttackSpec&, const AttackSpec&) = default;
};

using AttackChain = std::vector<AttackSpec>;

/// Parses "jpeg:60,blur:5,1.0,rot:15". A token with ':' starts an attack;
/// tokens without one extend the previous attack's parameters.
AttackChain parse_attack_chain(const std::string& text);

/// Canonical token form, e.g. "blur:5,1" (round-trips through the parser).
std::string to_string(const AttackSpec& spec);
std::string to_string(const AttackChain& chain);

bool is_video_attack(AttackKind kind);

/// Throws an attack error if a parameter is out of range.
void validate(const AttackSpec& spec);

/// Applies one attack. `seed` drives the random attacks (noise, random swaps).
Media apply_attack(const AttackSpec& spec, const Media& media, std::uint64_t seed);
Media apply_chain(const AttackChain& chain, const Media& media, std::uint64_t seed);

}  // namespace lmk
