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

// Per-row / per-block bodies shared by the serial and OpenMP kernels. Only the
// outer loop differs between the two translation units.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "lmk/kernels.hpp"

namespace lmk::kernels::detail {

struct FftPlan {
  std::size_t n = 0;
  std::vector<std::size_t> bitrev;
  std::vector<std::complex<double>> twiddle;  // exp(-2 pi i k / n), k < n/2
};

inline FftPlan make_fft_plan(std::size_t n) {
  FftPlan plan;
  plan.n = n;
  plan.bitrev.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    plan.bitrev[i] = r;
  }
  plan.twiddle.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    plan.twiddle[k] = {std::cos(a), std::sin(a)};
  }
  return plan;
}

inline void fft_row(std::complex<double>* x, const FftPlan& plan, bool inverse) {
  const std::size_t n = plan.n;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = plan.bitrev[i];
    if (j > i) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = plan.twiddle[k * step];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = x[start + k];
        const std::complex<double> v = x[start + k + half] * w;
        x[start + k] = u + v;
        x[start + k + half] = u - v;
      }
    }
  }
}

inline std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= n) return n - 1;
  return static_cast<std::size_t>(i);
}

// Horizontal pass of the edge-clamped separable convolution for row y.
inline void convolve_row_same(const double* in, double* out, std::size_t width,
                              std::span<const double> kernel) {
  const auto r = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  for (std::size_t x = 0; x < width; ++x) {
    double s = 0.0;
    for (std::size_t j = 0; j < kernel.size(); ++j) {
      const auto src = static_cast<std::ptrdiff_t>(x) + static_cast<std::ptrdiff_t>(j) - r;
      s += kernel[j] * in[clamp_index(src, width)];
    }
    out[x] = s;
  }
}

// Vertical pass for output row y, reading the horizontally filtered buffer.
inline void convolve_col_same(const double* tmp, double* out_row, std::size_t y, std::size_t height,
                              std::size_t width, std::span<const double> kernel) {
  const auto r = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  for (std::size_t x = 0; x < width; ++x) out_row[x] = 0.0;
  for (std::size_t j = 0; j < kernel.size(); ++j) {
    const auto src = static_cast<std::ptrdiff_t>(y) + static_cast<std::ptrdiff_t>(j) - r;
    const double* row = tmp + clamp_index(src, height) * width;
    const double k = kernel[j];
    for (std::size_t x = 0; x < width; ++x) out_row[x] += k * row[x];
  }
}

inline void convolve_row_valid(const double* in, double* out, std::size_t out_width,
                               std::span<const double> kernel) {
  for (std::size_t x = 0; x < out_width; ++x) {
    double s = 0.0;
    for (std::size_t j = 0; j < kernel.size(); ++j) s += kernel[j] * in[x + j];
    out[x] = s;
  }
}

inline void convolve_col_valid(const double* tmp, double* out_row, std::size_t y,
                               std::size_t out_width, std::span<const double> kernel) {
  for (std::size_t x = 0; x < out_width; ++x) out_row[x] = 0.0;
  for (std::size_t j = 0; j < kernel.size(); ++j) {
    const double* row = tmp + (y + j) * out_width;
    const double k = kernel[j];
    for (std::size_t x = 0; x < out_width; ++x) out_row[x] += k * row[x];
  }
}

struct DctBasis {
  double c[8][8];  // c[u][x] = a(u) cos((2x+1) u pi / 16)
};

inline const DctBasis& dct_basis() {
  static const DctBasis basis = [] {
    DctBasis b{};
    for (int u = 0; u < 8; ++u) {
      const double a = (u == 0) ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int x = 0; x < 8; ++x) {
        b.c[u][x] = a * std::cos((2.0 * x + 1.0) * u * std::numbers::pi / 16.0);
      }
    }
    return b;
  }();
  return basis;
}

inline void dct_quantize_block(double* plane, std::size_t width, std::size_t by, std::size_t bx,
                               const DctTable& quant) {
  const DctBasis& b = dct_basis();
  double blk[8][8];
  double tmp[8][8];
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) blk[y][x] = plane[(by * 8 + y) * width + bx * 8 + x];
  // Rows then columns.
  for (int y = 0; y < 8; ++y)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += b.c[u][x] * blk[y][x];
      tmp[y][u] = s;
    }
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += b.c[v][y] * tmp[y][u];
      const double q = quant[v * 8 + u];
      blk[v][u] = std::round(s / q) * q;
    }
  for (int v = 0; v < 8; ++v)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += b.c[u][x] * blk[v][u];
      tmp[v][x] = s;
    }
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += b.c[v][y] * tmp[v][x];
      plane[(by * 8 + y) * width + bx * 8 + x] = s;
    }
}

inline double bilinear_tap(const double* in, std::size_t h, std::size_t w, std::ptrdiff_t y,
                           std::ptrdiff_t x, Border border) {
  if (border == Border::kClamp) return in[clamp_index(y, h) * w + clamp_index(x, w)];
  if (y < 0 || x < 0 || static_cast<std::size_t>(y) >= h || static_cast<std::size_t>(x) >= w) {
    return 0.0;
  }
  return in[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)];
}

inline void resample_row(const double* in, std::size_t in_h, std::size_t in_w, double* out_row,
                         std::size_t y, std::size_t out_w, const AffineMap& m, Border border) {
  for (std::size_t x = 0; x < out_w; ++x) {
    const double sx = m.xx * x + m.xy * y + m.x0;
    const double sy = m.yx * x + m.yy * y + m.y0;
    const double fx0 = std::floor(sx);
    const double fy0 = std::floor(sy);
    const double fx = sx - fx0;
    const double fy = sy - fy0;
    const auto ix = static_cast<std::ptrdiff_t>(fx0);
    const auto iy = static_cast<std::ptrdiff_t>(fy0);
    double v = (1.0 - fy) * (1.0 - fx) * bilinear_tap(in, in_h, in_w, iy, ix, border);
    if (fx != 0.0) v += (1.0 - fy) * fx * bilinear_tap(in, in_h, in_w, iy, ix + 1, border);
    if (fy != 0.0) {
      v += fy * (1.0 - fx) * bilinear_tap(in, in_h, in_w, iy + 1, ix, border);
      if (fx != 0.0) v += fy * fx * bilinear_tap(in, in_h, in_w, iy + 1, ix + 1, border);
    }
    out_row[x] = v;
  }
}

}  // namespace lmk::kernels::detail
