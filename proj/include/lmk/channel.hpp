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

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmk/rng.hpp"
#include "lmk/tensor.hpp"
#include "lmk/toy_codec.hpp"

namespace lmk {

class BridgeClient;

enum class MediaKind { kLatent, kImage };

/// Output of generation: either a raw latent passthrough or pixels in [0, 255].
struct Media {
  MediaKind kind = MediaKind::kLatent;
  Tensor data;
};

/// Pixel view of media for metrics and thumbnails. Latents use the codec's
/// fixed +/-4 sigma affine map.
Tensor display_pixels(const Media& media);

enum class ChannelKind { kIdentity, kLatentNoise, kToyCodec, kExternalBridge };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::kIdentity;
  double sigma = 0.0;          // latent_noise
  int upsample = 8;            // toy_codec
  std::uint64_t codec_seed = 0;
  double sigma_inv = 0.0;
  std::string command;         // external_bridge
  double timeout_s = 120.0;
  std::size_t steps = 10;      // trajectory length

  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

ChannelSpec channel_spec_from_json(const nlohmann::json& j);
nlohmann::json channel_spec_to_json(const ChannelSpec& spec);

/// CLI shorthand: identity | noise:<sigma> | toycodec[:<sigma_inv>] | bridge:<command>.
/// Fields not named by the token keep the values of `base`.
ChannelSpec parse_channel_token(const std::string& token, const ChannelSpec& base = {});

/// Short canonical label, e.g. "toy_codec(u=8,sigma_inv=0.3)".
std::string describe(const ChannelSpec& spec);

/// Generation + inversion pair standing in for sampling and DDIM inversion.
/// Immutable after construction; invert noise is addressed by call id.
class Channel {
 public:
  Channel(ChannelSpec spec, Shape latent_shape, const Key256& noise_key);
  ~Channel();

  const ChannelSpec& spec() const { return spec_; }
  const Shape& latent_shape() const { return latent_shape_; }
  MediaKind media_kind() const;
  /// Expected media shape; empty for a bridge (decided by the backend).
  std::optional<Shape> media_shape() const;

  Media forward(const Tensor& latent) const;
  Tensor invert(const Media& media, std::uint64_t call_id) const;

  bool supports_trajectory() const { return spec_.kind != ChannelKind::kExternalBridge; }
  /// Noiseless invert(forward(x)).
  Tensor latent_equivalent(const Tensor& latent) const;
  /// S states linearly interpolated from the latent to its latent equivalent.
  std::vector<Tensor> trajectory(const Tensor& latent) const;
  Tensor trajectory_state(const Tensor& latent, std::size_t step) const;
  /// Applies `modifier` to state `step` and completes generation from there.
  Media inject_at(const Tensor& latent, std::size_t step,
                  const std::function<Tensor(const Tensor&)>& modifier) const;

  /// Linear pooled-media operator for semantic hashing; empty for a bridge.
  std::optional<PoolOperator> pool_operator(std::size_t grid) const;
  const ToyCodec* codec() const { return codec_.get(); }

 private:
  void check_latent(const Tensor& latent) const;
  Tensor decode_noiseless(const Media& media) const;

  ChannelSpec spec_;
  Shape latent_shape_;
  Key256 noise_key_;
  std::unique_ptr<ToyCodec> codec_;
  std::shared_ptr<BridgeClient> bridge_;
};

}  // namespace lmk
