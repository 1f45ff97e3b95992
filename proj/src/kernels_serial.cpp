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

// Reference implementations: straightforward loops, no threading.

#include <vector>

#include "kernels_impl.hpp"
#include "lmk/error.hpp"

namespace lmk::kernels::serial {

namespace {
bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

void fft_rows(std::span<std::complex<double>> data, std::size_t rows, std::size_t cols, bool inverse) {
  require(is_pow2(cols) && data.size() == rows * cols, ErrorKind::kShape,
          "fft_rows: row length must be a power of two");
  const detail::FftPlan plan = detail::make_fft_plan(cols);
  const auto n = static_cast<std::ptrdiff_t>(rows);
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    detail::fft_row(data.data() + static_cast<std::size_t>(r) * cols, plan, inverse);
  }
}

void convolve_separable(std::span<const double> in, std::span<double> out, std::size_t height,
                        std::size_t width, std::span<const double> kernel_y,
                        std::span<const double> kernel_x) {
  require(in.size() == height * width && out.size() == height * width, ErrorKind::kShape,
          "convolve_separable: buffer size mismatch");
  require(kernel_x.size() % 2 == 1 && kernel_y.size() % 2 == 1, ErrorKind::kDomain,
          "convolve_separable: kernels must have odd length");
  std::vector<double> tmp(height * width);
  const auto h = static_cast<std::ptrdiff_t>(height);
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    const auto row = static_cast<std::size_t>(y) * width;
    detail::convolve_row_same(in.data() + row, tmp.data() + row, width, kernel_x);
  }
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    const auto uy = static_cast<std::size_t>(y);
    detail::convolve_col_same(tmp.data(), out.data() + uy * width, uy, height, width, kernel_y);
  }
}

void convolve_separable_valid(std::span<const double> in, std::span<double> out, std::size_t height,
                              std::size_t width, std::span<const double> kernel) {
  const std::size_t k = kernel.size();
  require(k <= height && k <= width, ErrorKind::kShape, "convolve_separable_valid: kernel larger than image");
  const std::size_t oh = height - k + 1;
  const std::size_t ow = width - k + 1;
  require(in.size() == height * width && out.size() == oh * ow, ErrorKind::kShape,
          "convolve_separable_valid: buffer size mismatch");
  std::vector<double> tmp(height * ow);
  const auto h = static_cast<std::ptrdiff_t>(height);
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    const auto uy = static_cast<std::size_t>(y);
    detail::convolve_row_valid(in.data() + uy * width, tmp.data() + uy * ow, ow, kernel);
  }
  const auto ohs = static_cast<std::ptrdiff_t>(oh);
  for (std::ptrdiff_t y = 0; y < ohs; ++y) {
    const auto uy = static_cast<std::size_t>(y);
    detail::convolve_col_valid(tmp.data(), out.data() + uy * ow, uy, ow, kernel);
  }
}

void dct_quantize_blocks(std::span<double> plane, std::size_t height, std::size_t width,
                         const DctTable& quant) {
  require(height % 8 == 0 && width % 8 == 0 && plane.size() == height * width, ErrorKind::kShape,
          "dct_quantize_blocks: plane must be a whole number of 8x8 blocks");
  const std::size_t bw = width / 8;
  const auto blocks = static_cast<std::ptrdiff_t>((height / 8) * bw);
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    detail::dct_quantize_block(plane.data(), width, ub / bw, ub % bw, quant);
  }
}

void resample_bilinear(std::span<const double> in, std::size_t in_h, std::size_t in_w,
                       std::span<double> out, std::size_t out_h, std::size_t out_w,
                       const AffineMap& map, Border border) {
  require(in.size() == in_h * in_w && out.size() == out_h * out_w, ErrorKind::kShape,
          "resample_bilinear: buffer size mismatch");
  const auto h = static_cast<std::ptrdiff_t>(out_h);
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    const auto uy = static_cast<std::size_t>(y);
    detail::resample_row(in.data(), in_h, in_w, out.data() + uy * out_w, uy, out_w, map, border);
  }
}

}  // namespace lmk::kernels::serial
