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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lmk {

using Complex = std::complex<double>;

/// Centered, unitary-normalized 2-D spectrum: the zero frequency sits at
/// (height/2, width/2).
struct SpectralPlane {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Complex> data;

  Complex& at(std::size_t i, std::size_t j) { return data[i * width + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return data[i * width + j]; }
};

SpectralPlane fft2_centered(std::span<const double> plane, std::size_t height, std::size_t width);

/// Complex inverse of fft2_centered.
std::vector<Complex> ifft2_centered(const SpectralPlane& spectrum);

/// Real part of the inverse; `max_imag` (optional) receives the largest |imag| discarded.
std::vector<double> ifft2_centered_real(const SpectralPlane& spectrum, double* max_imag = nullptr);

/// Index of the conjugate partner under 180 degree rotation about the center.
inline std::size_t mirror_index(std::size_t i, std::size_t n) { return (n - i) % n; }

enum class MaskKind { kCircle, kRing, kRingSet };

/// Boolean membership over a centered spectrum. Ring membership is decided by
/// the Euclidean distance to the center rounded to the nearest integer.
struct FourierMask {
  std::size_t height = 0;
  std::size_t width = 0;
  MaskKind kind = MaskKind::kRingSet;
  std::vector<int> radii;  // rings listed, or {r} for a circle
  std::vector<unsigned char> cells;

  bool contains(std::size_t i, std::size_t j) const { return cells[i * width + j] != 0; }
  std::size_t count() const;
  /// Flat indices of member cells in row-major order.
  std::vector<std::size_t> members() const;
};

int rounded_radius(std::size_t i, std::size_t j, std::size_t height, std::size_t width);

FourierMask ring_mask(std::size_t height, std::size_t width, std::span<const int> radii);
FourierMask circle_mask(std::size_t height, std::size_t width, int radius);

/// Consecutive rings 1..radius (empty mask for radius 0).
FourierMask ring_set_mask(std::size_t height, std::size_t width, int radius);

}  // namespace lmk
