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

#include "lmk/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "lmk/error.hpp"

namespace lmk {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kUnknownAlgorithm: return "unknown_algorithm";
    case ErrorKind::kChannel: return "channel";
    case ErrorKind::kCapability: return "capability";
    case ErrorKind::kProtocol: return "protocol";
    case ErrorKind::kTimeout: return "timeout";
    case ErrorKind::kAttack: return "attack";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

std::string to_string(const Shape& shape) {
  std::string out;
  if (shape.frames != 1) out += std::to_string(shape.frames) + "x";
  out += std::to_string(shape.channels) + "x" + std::to_string(shape.height) + "x" +
         std::to_string(shape.width);
  return out;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_latent_shape(const Shape& shape) {
  require(shape.frames > 0 && shape.channels > 0, ErrorKind::kShape,
          "latent shape " + to_string(shape) + " has an empty extent");
  require(is_power_of_two(shape.height) && is_power_of_two(shape.width), ErrorKind::kShape,
          "latent shape " + to_string(shape) + ": height and width must be powers of two");
}

Tensor::Tensor(Shape shape, double fill) : shape_(shape), data_(shape.size(), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
  require(data_.size() == shape_.size(), ErrorKind::kShape,
          "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
              to_string(shape_));
}

std::span<double> Tensor::plane(std::size_t t, std::size_t c) {
  return std::span<double>(data_).subspan(index(t, c, 0, 0), shape_.plane_size());
}

std::span<const double> Tensor::plane(std::size_t t, std::size_t c) const {
  return std::span<const double>(data_).subspan(index(t, c, 0, 0), shape_.plane_size());
}

std::span<double> Tensor::frame(std::size_t t) {
  return std::span<double>(data_).subspan(t * shape_.frame_size(), shape_.frame_size());
}

std::span<const double> Tensor::frame(std::size_t t) const {
  return std::span<const double>(data_).subspan(t * shape_.frame_size(), shape_.frame_size());
}

Tensor Tensor::frame_tensor(std::size_t t) const {
  Shape s = shape_;
  s.frames = 1;
  auto f = frame(t);
  return Tensor(s, std::vector<double>(f.begin(), f.end()));
}

void Tensor::set_frame(std::size_t t, const Tensor& frame_data) {
  require(frame_data.size() == shape_.frame_size(), ErrorKind::kShape,
          "frame size mismatch: " + to_string(frame_data.shape()) + " into " + to_string(shape_));
  std::copy(frame_data.data().begin(), frame_data.data().end(), frame(t).begin());
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  require(a.shape() == b.shape(), ErrorKind::kShape,
          "shape mismatch: " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::kShape, "cosine similarity of unequal lengths");
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

}  // namespace lmk
