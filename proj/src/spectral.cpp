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

#include "lmk/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "lmk/error.hpp"
#include "lmk/kernels.hpp"
#include "lmk/tensor.hpp"

namespace lmk {
namespace {

void transpose(const std::vector<Complex>& in, std::vector<Complex>& out, std::size_t rows,
               std::size_t cols) {
  out.resize(in.size());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[c * rows + r] = in[r * cols + c];
}

// Unnormalized 2-D transform of a row-major rows x cols buffer.
void fft2_inplace(std::vector<Complex>& data, std::size_t rows, std::size_t cols, bool inverse) {
  std::vector<Complex> t;
  kernels::fft_rows(data, rows, cols, inverse);
  transpose(data, t, rows, cols);
  kernels::fft_rows(t, cols, rows, inverse);
  transpose(t, data, cols, rows);
}

void check_dims(std::size_t height, std::size_t width) {
  require(is_power_of_two(height) && is_power_of_two(width), ErrorKind::kShape,
          "spectral plane " + std::to_string(height) + "x" + std::to_string(width) +
              " must have power-of-two sides");
}

}  // namespace

SpectralPlane fft2_centered(std::span<const double> plane, std::size_t height, std::size_t width) {
  check_dims(height, width);
  require(plane.size() == height * width, ErrorKind::kShape, "fft2_centered: plane size mismatch");
  std::vector<Complex> buf(plane.begin(), plane.end());
  fft2_inplace(buf, height, width, false);
  const double scale = 1.0 / std::sqrt(static_cast<double>(height * width));
  SpectralPlane out{height, width, std::vector<Complex>(height * width)};
  for (std::size_t i = 0; i < height; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      out.at((i + height / 2) % height, (j + width / 2) % width) = buf[i * width + j] * scale;
    }
  }
  return out;
}

std::vector<Complex> ifft2_centered(const SpectralPlane& spectrum) {
  const std::size_t h = spectrum.height;
  const std::size_t w = spectrum.width;
  check_dims(h, w);
  std::vector<Complex> buf(h * w);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) buf[i * w + j] = spectrum.at((i + h / 2) % h, (j + w / 2) % w);
  fft2_inplace(buf, h, w, true);
  const double scale = 1.0 / std::sqrt(static_cast<double>(h * w));
  for (auto& v : buf) v *= scale;
  return buf;
}

std::vector<double> ifft2_centered_real(const SpectralPlane& spectrum, double* max_imag) {
  const auto full = ifft2_centered(spectrum);
  std::vector<double> out(full.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    out[i] = full[i].real();
    worst = std::max(worst, std::abs(full[i].imag()));
  }
  if (max_imag) *max_imag = worst;
  return out;
}

std::size_t FourierMask::count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), 1));
}

std::vector<std::size_t> FourierMask::members() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (cells[k]) out.push_back(k);
  return out;
}

int rounded_radius(std::size_t i, std::size_t j, std::size_t height, std::size_t width) {
  const double di = static_cast<double>(i) - static_cast<double>(height / 2);
  const double dj = static_cast<double>(j) - static_cast<double>(width / 2);
  return static_cast<int>(std::lround(std::sqrt(di * di + dj * dj)));
}

FourierMask ring_mask(std::size_t height, std::size_t width, std::span<const int> radii) {
  check_dims(height, width);
  const int limit = static_cast<int>(std::min(height, width) / 2);
  for (int r : radii) {
    require(r > 0 && r <= limit, ErrorKind::kDomain,
            "ring radius " + std::to_string(r) + " outside (0, " + std::to_string(limit) + "]");
  }
  FourierMask mask{height, width, MaskKind::kRingSet, {radii.begin(), radii.end()},
                   std::vector<unsigned char>(height * width, 0)};
  if (radii.size() == 1) mask.kind = MaskKind::kRing;
  for (std::size_t i = 0; i < height; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      const int r = rounded_radius(i, j, height, width);
      if (std::find(radii.begin(), radii.end(), r) != radii.end()) mask.cells[i * width + j] = 1;
    }
  }
  return mask;
}

FourierMask circle_mask(std::size_t height, std::size_t width, int radius) {
  check_dims(height, width);
  const int limit = static_cast<int>(std::min(height, width) / 2);
  require(radius > 0 && radius <= limit, ErrorKind::kDomain,
          "circle radius " + std::to_string(radius) + " outside (0, " + std::to_string(limit) + "]");
  FourierMask mask{height, width, MaskKind::kCircle, {radius},
                   std::vector<unsigned char>(height * width, 0)};
  for (std::size_t i = 0; i < height; ++i)
    for (std::size_t j = 0; j < width; ++j)
      if (rounded_radius(i, j, height, width) < radius) mask.cells[i * width + j] = 1;
  return mask;
}

FourierMask ring_set_mask(std::size_t height, std::size_t width, int radius) {
  std::vector<int> radii;
  for (int r = 1; r <= radius; ++r) radii.push_back(r);
  if (radii.empty()) {
    check_dims(height, width);
    return FourierMask{height, width, MaskKind::kRingSet, {}, std::vector<unsigned char>(height * width, 0)};
  }
  return ring_mask(height, width, radii);
}

}  // namespace lmk
