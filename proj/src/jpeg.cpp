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

#include "lmk/jpeg.hpp"

#include <algorithm>
#include <cmath>

#include "lmk/error.hpp"

namespace lmk {
namespace {

constexpr int kLuma[64] = {16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
                           14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
                           18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
                           49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

constexpr int kChroma[64] = {17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
                             24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
                             99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
                             99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

// Runs the block quantizer on an h x w plane, padding to multiples of 8 by
// edge replication.
void quantize_plane(std::vector<double>& plane, std::size_t h, std::size_t w, const kernels::DctTable& q) {
  const std::size_t ph = (h + 7) / 8 * 8;
  const std::size_t pw = (w + 7) / 8 * 8;
  if (ph == h && pw == w) {
    kernels::dct_quantize_blocks(plane, h, w, q);
    return;
  }
  std::vector<double> padded(ph * pw);
  for (std::size_t y = 0; y < ph; ++y) {
    for (std::size_t x = 0; x < pw; ++x) padded[y * pw + x] = plane[std::min(y, h - 1) * w + std::min(x, w - 1)];
  }
  kernels::dct_quantize_blocks(padded, ph, pw, q);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) plane[y * w + x] = padded[y * pw + x];
  }
}

Tensor process(const Tensor& rgb, int quality, bool residual) {
  const Shape& s = rgb.shape();
  require(s.channels == 3, ErrorKind::kAttack, "jpeg needs 3-channel RGB media, got " + to_string(s));
  const auto luma_q = jpeg_quant_table(false, quality);
  const auto chroma_q = jpeg_quant_table(true, quality);
  const double level = residual ? 0.0 : 128.0;
  const std::size_t n = s.plane_size();
  Tensor out(s);
  std::vector<double> y(n), cb(n), cr(n);
  for (std::size_t t = 0; t < s.frames; ++t) {
    const auto r = rgb.plane(t, 0);
    const auto g = rgb.plane(t, 1);
    const auto b = rgb.plane(t, 2);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i] - level;
      cb[i] = -0.168736 * r[i] - 0.331264 * g[i] + 0.5 * b[i];
      cr[i] = 0.5 * r[i] - 0.418688 * g[i] - 0.081312 * b[i];
    }
    quantize_plane(y, s.height, s.width, luma_q);
    quantize_plane(cb, s.height, s.width, chroma_q);
    quantize_plane(cr, s.height, s.width, chroma_q);
    auto ro = out.plane(t, 0);
    auto go = out.plane(t, 1);
    auto bo = out.plane(t, 2);
    for (std::size_t i = 0; i < n; ++i) {
      const double yy = y[i] + level;
      double rv = yy + 1.402 * cr[i];
      double gv = yy - 0.344136 * cb[i] - 0.714136 * cr[i];
      double bv = yy + 1.772 * cb[i];
      if (!residual) {
        rv = std::clamp(rv, 0.0, 255.0);
        gv = std::clamp(gv, 0.0, 255.0);
        bv = std::clamp(bv, 0.0, 255.0);
      }
      ro[i] = rv;
      go[i] = gv;
      bo[i] = bv;
    }
  }
  return out;
}

}  // namespace

kernels::DctTable jpeg_quant_table(bool chroma, int quality) {
  require(quality >= 1 && quality <= 100, ErrorKind::kAttack,
          "jpeg quality must be in [1, 100], got " + std::to_string(quality));
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  const int* base = chroma ? kChroma : kLuma;
  kernels::DctTable t{};
  for (int i = 0; i < 64; ++i) t[i] = std::clamp((base[i] * scale + 50) / 100, 1, 255);
  return t;
}

Tensor jpeg_roundtrip(const Tensor& rgb, int quality) { return process(rgb, quality, false); }

Tensor jpeg_quantize_residual(const Tensor& rgb_delta, int quality) { return process(rgb_delta, quality, true); }

}  // namespace lmk
