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

// Internal per-algorithm adapter behind WatermarkSystem.

#include <cstdint>
#include <memory>

#include <json.hpp>

#include "lmk/channel.hpp"
#include "lmk/registry.hpp"

namespace lmk {

class Algorithm {
 public:
  virtual ~Algorithm() = default;

  virtual Orientation orientation() const = 0;
  /// Key methods report p-values and threshold them directly.
  virtual bool reports_p_value() const { return false; }

  /// Watermarked initial latent for a sample whose unwatermarked latent is `base`.
  virtual Tensor watermarked_latent(std::uint64_t sample_id, const Tensor& base) const = 0;
  virtual Media generate(std::uint64_t sample_id, const Tensor& base) const {
    return channel().forward(watermarked_latent(sample_id, base));
  }

  /// Unwatermarked counterpart used by compared-mode quality. Methods that
  /// draw their own initial noise return that noise without the mark.
  virtual Tensor reference_latent(std::uint64_t /*sample_id*/, const Tensor& base) const { return base; }

  /// Score and algorithm details; threshold and verdict are filled by the system.
  virtual DetectionResult detect(const Tensor& inverted, const Media& media) const = 0;

  /// Score cut equivalent to p < alpha (key methods only).
  virtual double score_for_alpha(double alpha) const;

  virtual nlohmann::json key_json() const = 0;

  /// Algorithm-specific panels; `data` already holds latents, media and detection.
  virtual void fill_visualization(VisualizationData& data, std::uint64_t sample_id, const Tensor& base) const = 0;

  const Channel& channel() const { return *channel_; }

 protected:
  explicit Algorithm(const Channel& channel) : channel_(&channel) {}

 private:
  const Channel* channel_;
};

/// Builds the adapter from config params (key derived from the master key) or
/// from a serialized key.
std::unique_ptr<Algorithm> make_algorithm(const AlgorithmConfig& config, const Channel& channel,
                                          const nlohmann::json* key);

}  // namespace lmk
