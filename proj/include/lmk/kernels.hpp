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

// Data-parallel inner loops. Each kernel has a plain serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp` that must produce
// bitwise-identical results; the dispatching overloads pick one per call.

#include <array>
#include <complex>
#include <cstddef>
#include <span>

namespace lmk::kernels {

enum class Exec { kSerial, kParallel };

void set_default_exec(Exec exec);
Exec default_exec();

/// src = (xx*x + xy*y + x0, yx*x + yy*y + y0) for destination pixel (x, y).
struct AffineMap {
  double xx = 1.0, xy = 0.0, x0 = 0.0;
  double yx = 0.0, yy = 1.0, y0 = 0.0;
};

enum class Border { kZero, kClamp };

using DctTable = std::array<double, 64>;

namespace serial {
void fft_rows(std::span<std::complex<double>> data, std::size_t rows, std::size_t cols, bool inverse);
void convolve_separable(std::span<const double> in, std::span<double> out, std::size_t height,
                        std::size_t width, std::span<const double> kernel_y,
                        std::span<const double> kernel_x);
void convolve_separable_valid(std::span<const double> in, std::span<double> out, std::size_t height,
                              std::size_t width, std::span<const double> kernel);
void dct_quantize_blocks(std::span<double> plane, std::size_t height, std::size_t width,
                         const DctTable& quant);
void resample_bilinear(std::span<const double> in, std::size_t in_h, std::size_t in_w,
                       std::span<double> out, std::size_t out_h, std::size_t out_w,
                       const AffineMap& map, Border border);
}  // namespace serial

namespace omp {
void fft_rows(std::span<std::complex<double>> data, std::size_t rows, std::size_t cols, bool inverse);
void convolve_separable(std::span<const double> in, std::span<double> out, std::size_t height,
                        std::size_t width, std::span<const double> kernel_y,
                        std::span<const double> kernel_x);
void convolve_separable_valid(std::span<const double> in, std::span<double> out, std::size_t height,
                              std::size_t width, std::span<const double> kernel);
void dct_quantize_blocks(std::span<double> plane, std::size_t height, std::size_t width,
                         const DctTable& quant);
void resample_bilinear(std::span<const double> in, std::size_t in_h, std::size_t in_w,
                       std::span<double> out, std::size_t out_h, std::size_t out_w,
                       const AffineMap& map, Border border);
}  // namespace omp

/// Unnormalized in-place radix-2 FFT of every row; cols must be a power of two.
void fft_rows(std::span<std::complex<double>> data, std::size_t rows, std::size_t cols, bool inverse,
              Exec exec = default_exec());

/// Edge-clamped ("same" size) separable convolution with odd-length kernels.
void convolve_separable(std::span<const double> in, std::span<double> out, std::size_t height,
                        std::size_t width, std::span<const double> kernel_y,
                        std::span<const double> kernel_x, Exec exec = default_exec());

/// "Valid" separable convolution: out is (height-k+1) x (width-k+1).
void convolve_separable_valid(std::span<const double> in, std::span<double> out, std::size_t height,
                              std::size_t width, std::span<const double> kernel,
                              Exec exec = default_exec());

/// Orthonormal 8x8 DCT-II, quantize/dequantize by `quant`, inverse DCT, per block.
/// height and width must be multiples of 8.
void dct_quantize_blocks(std::span<double> plane, std::size_t height, std::size_t width,
                         const DctTable& quant, Exec exec = default_exec());

void resample_bilinear(std::span<const double> in, std::size_t in_h, std::size_t in_w,
                       std::span<double> out, std::size_t out_h, std::size_t out_w,
                       const AffineMap& map, Border border, Exec exec = default_exec());

}  // namespace lmk::kernels
