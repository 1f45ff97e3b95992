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

#include "lmk/kernels.hpp"

#include <atomic>

namespace lmk::kernels {
namespace {

std::atomic<Exec> g_default_exec{Exec::kParallel};

// Below this many output elements a parallel region costs more than it saves.
constexpr std::size_t kParallelThreshold = 16384;

bool go_parallel(Exec exec, std::size_t work) {
  return exec == Exec::kParallel && work >= kParallelThreshold;
}

}  // namespace

void set_default_exec(Exec exec) { g_default_exec.store(exec); }
Exec default_exec() { return g_default_exec.load(); }

void fft_rows(std::span<std::complex<double>> data, std::size_t rows, std::size_t cols, bool inverse,
              Exec exec) {
  if (go_parallel(exec, rows * cols)) {
    omp::fft_rows(data, rows, cols, inverse);
  } else {
    serial::fft_rows(data, rows, cols, inverse);
  }
}

void convolve_separable(std::span<const double> in, std::span<double> out, std::size_t height,
                        std::size_t width, std::span<const double> kernel_y,
                        std::span<const double> kernel_x, Exec exec) {
  if (go_parallel(exec, height * width)) {
    omp::convolve_separable(in, out, height, width, kernel_y, kernel_x);
  } else {
    serial::convolve_separable(in, out, height, width, kernel_y, kernel_x);
  }
}

void convolve_separable_valid(std::span<const double> in, std::span<double> out, std::size_t height,
                              std::size_t width, std::span<const double> kernel, Exec exec) {
  if (go_parallel(exec, height * width)) {
    omp::convolve_separable_valid(in, out, height, width, kernel);
  } else {
    serial::convolve_separable_valid(in, out, height, width, kernel);
  }
}

void dct_quantize_blocks(std::span<double> plane, std::size_t height, std::size_t width,
                         const DctTable& quant, Exec exec) {
  if (go_parallel(exec, height * width)) {
    omp::dct_quantize_blocks(plane, height, width, quant);
  } else {
    serial::dct_quantize_blocks(plane, height, width, quant);
  }
}

void resample_bilinear(std::span<const double> in, std::size_t in_h, std::size_t in_w,
                       std::span<double> out, std::size_t out_h, std::size_t out_w,
                       const AffineMap& map, Border border, Exec exec) {
  if (go_parallel(exec, out_h * out_w)) {
    omp::resample_bilinear(in, in_h, in_w, out, out_h, out_w, map, border);
  } else {
    serial::resample_bilinear(in, in_h, in_w, out, out_h, out_w, map, border);
  }
}

}  // namespace lmk::kernels
