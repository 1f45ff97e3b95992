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

#include "lmk/metrics.hpp"

#include <cmath>
#include <vector>

#include "lmk/error.hpp"
#include "lmk/kernels.hpp"

namespace lmk {
namespace {

void require_same(const Tensor& a, const Tensor& b, const char* metric) {
  require(a.shape() == b.shape(), ErrorKind::kShape,
          std::string(metric) + ": shapes " + to_string(a.shape()) + " and " + to_string(b.shape()) + " differ");
  require(a.size() > 0, ErrorKind::kShape, std::string(metric) + ": empty input");
}

constexpr std::size_t kWindow = 11;

std::vector<double> gaussian_window() {
  std::vector<double> k(kWindow);
  double sum = 0.0;
  for (std::size_t i = 0; i < kWindow; ++i) {
    const double x = static_cast<double>(i) - 5.0;
    k[i] = std::exp(-x * x / (2.0 * 1.5 * 1.5));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

double mse(const Tensor& a, const Tensor& b) {
  require_same(a, b, "mse");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double psnr(const Tensor& a, const Tensor& b) {
  const double m = mse(a, b);
  if (m == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(kPixelPeak * kPixelPeak / m));
}

double ssim(const Tensor& a, const Tensor& b) {
  require_same(a, b, "ssim");
  const Shape& s = a.shape();
  require(s.height >= kWindow && s.width >= kWindow, ErrorKind::kShape,
          "ssim: planes must be at least 11x11, got " + to_string(s));
  const double c1 = (0.01 * kPixelPeak) * (0.01 * kPixelPeak);
  const double c2 = (0.03 * kPixelPeak) * (0.03 * kPixelPeak);
  const auto win = gaussian_window();
  const std::size_t oh = s.height - kWindow + 1;
  const std::size_t ow = s.width - kWindow + 1;
  const std::size_t n = s.plane_size();
  std::vector<double> xx(n), yy(n), xy(n);
  std::vector<double> mx(oh * ow), my(oh * ow), sxx(oh * ow), syy(oh * ow), sxy(oh * ow);
  double total = 0.0;
  std::size_t planes = 0;
  for (std::size_t t = 0; t < s.frames; ++t) {
    for (std::size_t c = 0; c < s.channels; ++c) {
      const auto x = a.plane(t, c);
      const auto y = b.plane(t, c);
      for (std::size_t i = 0; i < n; ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
      }
      kernels::convolve_separable_valid(x, mx, s.height, s.width, win);
      kernels::convolve_separable_valid(y, my, s.height, s.width, win);
      kernels::convolve_separable_valid(xx, sxx, s.height, s.width, win);
      kernels::convolve_separable_valid(yy, syy, s.height, s.width, win);
      kernels::convolve_separable_valid(xy, sxy, s.height, s.width, win);
      double sum = 0.0;
      for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = sxx[i] - mx[i] * mx[i];
        const double vy = syy[i] - my[i] * my[i];
        const double cov = sxy[i] - mx[i] * my[i];
        sum += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
               ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
      }
      total += sum / static_cast<double>(mx.size());
      ++planes;
    }
  }
  return total / static_cast<double>(planes);
}

VideoProxies video_quality_proxies(const Tensor& frames) {
  const Shape& s = frames.shape();
  require(s.frames >= 2, ErrorKind::kShape, "video proxies need at least 2 frames, got " + std::to_string(s.frames));
  const std::size_t n = s.frame_size();
  VideoProxies p;
  double first = 0.0;
  for (std::size_t t = 0; t + 1 < s.frames; ++t) {
    const auto a = frames.frame(t);
    const auto b = frames.frame(t + 1);
    for (std::size_t i = 0; i < n; ++i) first += std::abs(b[i] - a[i]);
  }
  p.dynamic_degree_proxy = first / (static_cast<double>((s.frames - 1) * n) * kPixelPeak);
  if (s.frames >= 3) {
    double second = 0.0;
    for (std::size_t t = 1; t + 1 < s.frames; ++t) {
      const auto prev = frames.frame(t - 1);
      const auto cur = frames.frame(t);
      const auto next = frames.frame(t + 1);
      for (std::size_t i = 0; i < n; ++i) second += std::abs(next[i] - 2.0 * cur[i] + prev[i]);
    }
    p.frame_smoothness = 1.0 - second / (static_cast<double>((s.frames - 2) * n) * 2.0 * kPixelPeak);
  }
  return p;
}

}  // namespace lmk
