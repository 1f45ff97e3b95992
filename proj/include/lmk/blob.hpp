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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lmk/tensor.hpp"

namespace lmk {

// LMK1 blob layout (all little-endian):
//   bytes 0..3   magic "LMK1"
//   byte  4      rank (3 for C,H,W; 4 for T,C,H,W)
//   byte  5      dtype tag (1 = float32)
//   bytes 6..15  zero padding
//   rank x u32   dims
//   payload      float32 values, row-major
inline constexpr std::uint8_t kDtypeFloat32 = 1;

std::vector<std::uint8_t> encode_blob(const Tensor& tensor);
Tensor decode_blob(std::span<const std::uint8_t> bytes);

void write_blob(const std::filesystem::path& path, const Tensor& tensor);
Tensor read_blob(const std::filesystem::path& path);

/// Bare float32 little-endian payload (no header), as carried by the bridge protocol.
std::vector<std::uint8_t> encode_f32(std::span<const double> values);
std::vector<double> decode_f32(std::span<const std::uint8_t> bytes);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace lmk
