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

#include "lmk/kernels.hpp"
#include "lmk/tensor.hpp"

namespace lmk {

/// Baseline luminance or chrominance table scaled by the libjpeg quality rule
/// (q < 50: 5000/q, else 200 - 2q; entries floored at 1, capped at 255).
kernels::DctTable jpeg_quant_table(bool chroma, int quality);

/// Lossy part of a baseline JPEG codec applied to every 3-channel RGB frame:
/// BT.601 YCbCr, 4:4:4, 8x8 DCT quantization, inverse, back to RGB, clamp.
/// Planes whose sides are not multiples of 8 are edge-padded internally.
Tensor jpeg_roundtrip(const Tensor& rgb, int quality);

/// Same quantization applied to a signed RGB difference image (no level
/// shift and no clamp); used for predicted frames.
Tensor jpeg_quantize_residual(const Tensor& rgb_delta, int quality);

}  // namespace lmk
