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

#include <map>
#include <string>

#include "lmk/stats.hpp"
#include "lmk/tensor.hpp"

namespace lmk {

/// Peak value for pixel metrics.
inline constexpr double kPixelPeak = 255.0;
inline constexpr double kPsnrCap = 100.0;

double mse(const Tensor& a, const Tensor& b);
/// 10 log10(255^2 / MSE), capped at 100 dB (identical inputs hit the cap).
double psnr(const Tensor& a, const Tensor& b);
/// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
/// L = 255, averaged over all valid window positions of every plane.
double ssim(const Tensor& a, const Tensor& b);

/// Per-metric mean and standard deviation over samples.
using QualityReport = std::map<std::string, MeanStd>;

struct VideoProxies {
  double frame_smoothness = 1.0;      // 1 - mean |f[t+1] - 2 f[t] + f[t-1]| / (2 * 255)
  double dynamic_degree_proxy = 0.0;  // mean |f[t+1] - f[t]| / 255
};

/// Motion proxies over pixel frames (T >= 2).
VideoProxies video_quality_proxies(const Tensor& frames);

}  // namespace lmk
