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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lmk {

/// Extent of a frames x channels x height x width block. Images and latents
/// use frames == 1.
struct Shape {
  std::size_t frames = 1;
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t plane_size() const { return height * width; }
  std::size_t frame_size() const { return channels * height * width; }
  std::size_t size() const { return frames * frame_size(); }
  bool is_video() const { return frames > 1; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& shape);

bool is_power_of_two(std::size_t n);

/// Throws a shape error unless every extent is positive and H, W are powers of two.
void require_latent_shape(const Shape& shape);

/// Dense row-major real tensor. Used both for diffusion latents and for pixel
/// media; the meaning is carried by the owner.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double& at(std::size_t t, std::size_t c, std::size_t h, std::size_t w) {
    return data_[index(t, c, h, w)];
  }
  double at(std::size_t t, std::size_t c, std::size_t h, std::size_t w) const {
    return data_[index(t, c, h, w)];
  }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> plane(std::size_t t, std::size_t c);
  std::span<const double> plane(std::size_t t, std::size_t c) const;
  std::span<double> frame(std::size_t t);
  std::span<const double> frame(std::size_t t) const;

  /// Copy of frame t as a single-frame tensor.
  Tensor frame_tensor(std::size_t t) const;
  void set_frame(std::size_t t, const Tensor& frame);

  bool all_finite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t index(std::size_t t, std::size_t c, std::size_t h, std::size_t w) const {
    return ((t * shape_.channels + c) * shape_.height + h) * shape_.width + w;
  }

  Shape shape_;
  std::vector<double> data_;
};

double max_abs_diff(const Tensor& a, const Tensor& b);
double dot(std::span<const double> a, std::span<const double> b);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace lmk
