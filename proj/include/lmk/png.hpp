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
#include <string_view>
#include <vector>

namespace lmk {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

/// 8-bit RGB raster, row-major.
class RgbImage {
 public:
  RgbImage(std::size_t width, std::size_t height, Rgb fill = {255, 255, 255});

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  const std::vector<std::uint8_t>& bytes() const { return data_; }

  Rgb get(std::size_t x, std::size_t y) const;
  /// Out-of-bounds writes are clipped.
  void set(std::size_t x, std::size_t y, Rgb c);
  void fill_rect(std::size_t x, std::size_t y, std::size_t w, std::size_t h, Rgb c);
  /// 5x7 bitmap text (lowercase, digits, common punctuation; uppercase folds to
  /// lowercase), 6 px advance per character, clipped to max_width.
  void draw_text(std::size_t x, std::size_t y, std::string_view text, Rgb c, std::size_t max_width);

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> data_;
};

/// PNG bytes with fixed encoder settings and no time chunk, so equal images
/// give equal files.
std::vector<std::uint8_t> encode_png(const RgbImage& image);
void write_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace lmk
