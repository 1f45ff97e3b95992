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

#include "lmk/channel.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json_fields.hpp"
#include "lmk/bridge.hpp"
#include "lmk/error.hpp"

namespace lmk {
namespace {

using json = nlohmann::json;

std::string kind_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::kIdentity: return "identity";
    case ChannelKind::kLatentNoise: return "latent_noise";
    case ChannelKind::kToyCodec: return "toy_codec";
    case ChannelKind::kExternalBridge: return "external_bridge";
  }
  return "?";
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && !text.empty(), ErrorKind::kUsage,
          "bad " + what + " value '" + text + "'");
  return v;
}

void validate(const ChannelSpec& s) {
  require(s.sigma >= 0.0, ErrorKind::kConfig, "channel.sigma must be >= 0");
  require(s.sigma_inv >= 0.0, ErrorKind::kConfig, "channel.sigma_inv must be >= 0");
  require(s.upsample == 4 || s.upsample == 8, ErrorKind::kConfig, "channel.upsample must be 4 or 8");
  require(s.steps >= 2, ErrorKind::kConfig, "channel.steps must be >= 2");
  require(s.timeout_s > 0.0, ErrorKind::kConfig, "channel.timeout_s must be > 0");
  if (s.kind == ChannelKind::kExternalBridge) {
    require(!s.command.empty(), ErrorKind::kConfig, "channel.command must name the bridge program");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

Tensor display_pixels(const Media& media) {
  if (media.kind == MediaKind::kImage) return media.data;
  Tensor out = media.data;
  for (double& v : out.data()) v = std::clamp(ToyCodec::kOffset + ToyCodec::kScale * v, 0.0, 255.0);
  return out;
}

ChannelSpec channel_spec_from_json(const json& j) {
  detail::Fields f(j, "channel");
  ChannelSpec s;
  const auto kind = f.need<std::string>("kind");
  if (kind == "identity") {
    s.kind = ChannelKind::kIdentity;
  } else if (kind == "latent_noise") {
    s.kind = ChannelKind::kLatentNoise;
    s.sigma = f.need<double>("sigma");
  } else if (kind == "toy_codec") {
    s.kind = ChannelKind::kToyCodec;
    s.upsample = f.get<int>("upsample", s.upsample);
    s.codec_seed = f.get<std::uint64_t>("seed", s.codec_seed);
    s.sigma_inv = f.get<double>("sigma_inv", s.sigma_inv);
  } else if (kind == "external_bridge") {
    s.kind = ChannelKind::kExternalBridge;
    s.command = f.need<std::string>("command");
    s.timeout_s = f.get<double>("timeout_s", s.timeout_s);
  } else {
    fail(ErrorKind::kConfig, "channel.kind: unknown channel '" + kind + "'");
  }
  s.steps = f.get<std::size_t>("steps", s.steps);
  f.finish();
  validate(s);
  return s;
}

json channel_spec_to_json(const ChannelSpec& s) {
  json j = {{"kind", kind_name(s.kind)}};
  switch (s.kind) {
    case ChannelKind::kIdentity: break;
    case ChannelKind::kLatentNoise: j["sigma"] = s.sigma; break;
    case ChannelKind::kToyCodec:
      j["upsample"] = s.upsample;
      j["seed"] = s.codec_seed;
      j["sigma_inv"] = s.sigma_inv;
      break;
    case ChannelKind::kExternalBridge:
      j["command"] = s.command;
      j["timeout_s"] = s.timeout_s;
      break;
  }
  j["steps"] = s.steps;
  return j;
}

ChannelSpec parse_channel_token(const std::string& token, const ChannelSpec& base) {
  const auto colon = token.find(':');
  const std::string name = token.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : token.substr(colon + 1);
  ChannelSpec s = base;
  if (name == "identity") {
    require(arg.empty(), ErrorKind::kUsage, "channel 'identity' takes no argument");
    s.kind = ChannelKind::kIdentity;
  } else if (name == "noise" || name == "latent_noise") {
    s.kind = ChannelKind::kLatentNoise;
    require(!arg.empty(), ErrorKind::kUsage, "channel '" + name + "' needs a sigma, e.g. noise:1.0");
    s.sigma = parse_number(arg, "noise sigma");
  } else if (name == "toycodec" || name == "toy_codec") {
    s.kind = ChannelKind::kToyCodec;
    s.sigma_inv = arg.empty() ? 0.0 : parse_number(arg, "toycodec sigma_inv");
  } else if (name == "bridge") {
    s.kind = ChannelKind::kExternalBridge;
    s.command = arg;
  } else {
    fail(ErrorKind::kUsage, "unknown channel '" + token + "'");
  }
  validate(s);
  return s;
}

std::string describe(const ChannelSpec& s) {
  switch (s.kind) {
    case ChannelKind::kIdentity: return "identity";
    case ChannelKind::kLatentNoise: return "latent_noise(sigma=" + fmt(s.sigma) + ")";
    case ChannelKind::kToyCodec:
      return "toy_codec(u=" + std::to_string(s.upsample) + ",sigma_inv=" + fmt(s.sigma_inv) + ")";
    case ChannelKind::kExternalBridge: return "external_bridge(" + s.command + ")";
  }
  return "?";
}

Channel::Channel(ChannelSpec spec, Shape latent_shape, const Key256& noise_key)
    : spec_(std::move(spec)), latent_shape_(latent_shape), noise_key_(noise_key) {
  validate(spec_);
  require_latent_shape(latent_shape_);
  if (spec_.kind == ChannelKind::kToyCodec) {
    codec_ = std::make_unique<ToyCodec>(latent_shape_.channels, latent_shape_.height, latent_shape_.width,
                                        spec_.upsample, spec_.codec_seed);
  } else if (spec_.kind == ChannelKind::kExternalBridge) {
    bridge_ = std::make_shared<BridgeClient>(
        spec_.command, std::chrono::milliseconds(static_cast<long long>(spec_.timeout_s * 1000.0)));
  }
}

Channel::~Channel() = default;

MediaKind Channel::media_kind() const {
  return spec_.kind == ChannelKind::kToyCodec ? MediaKind::kImage : MediaKind::kLatent;
}

std::optional<Shape> Channel::media_shape() const {
  if (codec_) return codec_->media_shape(latent_shape_.frames);
  if (bridge_) return std::nullopt;
  return latent_shape_;
}

void Channel::check_latent(const Tensor& latent) const {
  require(latent.shape() == latent_shape_, ErrorKind::kShape,
          "latent shape " + to_string(latent.shape()) + " does not match channel latent " +
              to_string(latent_shape_));
}

Media Channel::forward(const Tensor& latent) const {
  check_latent(latent);
  switch (spec_.kind) {
    case ChannelKind::kIdentity:
    case ChannelKind::kLatentNoise:
      return {MediaKind::kLatent, latent};
    case ChannelKind::kToyCodec:
      return {MediaKind::kImage, codec_->encode(latent)};
    case ChannelKind::kExternalBridge: {
      Tensor out = bridge_->request("forward", latent);
      const MediaKind kind = out.shape() == latent_shape_ ? MediaKind::kLatent : MediaKind::kImage;
      return {kind, std::move(out)};
    }
  }
  fail(ErrorKind::kChannel, "unreachable channel kind");
}

Tensor Channel::decode_noiseless(const Media& media) const {
  if (const auto expect = media_shape()) {
    require(media.data.shape() == *expect, ErrorKind::kShape,
            "media shape " + to_string(media.data.shape()) + " does not match channel media " +
                to_string(*expect));
  }
  switch (spec_.kind) {
    case ChannelKind::kIdentity:
    case ChannelKind::kLatentNoise:
      return media.data;
    case ChannelKind::kToyCodec:
      return codec_->decode(media.data);
    case ChannelKind::kExternalBridge: {
      Tensor out = bridge_->request("invert", media.data);
      require(out.shape() == latent_shape_, ErrorKind::kProtocol,
              "bridge inverted to " + to_string(out.shape()) + ", expected " + to_string(latent_shape_));
      return out;
    }
  }
  fail(ErrorKind::kChannel, "unreachable channel kind");
}

Tensor Channel::invert(const Media& media, std::uint64_t call_id) const {
  Tensor out = decode_noiseless(media);
  const double sigma = spec_.kind == ChannelKind::kLatentNoise ? spec_.sigma
                       : spec_.kind == ChannelKind::kToyCodec  ? spec_.sigma_inv
                                                               : 0.0;
  if (sigma > 0.0) {
    const SeededRng rng(noise_key_, call_id);
    auto d = out.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += sigma * rng.normal_at(i);
  }
  return out;
}

Tensor Channel::latent_equivalent(const Tensor& latent) const {
  require(supports_trajectory(), ErrorKind::kCapability,
          "channel " + describe(spec_) + " does not expose a trajectory");
  return decode_noiseless(forward(latent));
}

Tensor Channel::trajectory_state(const Tensor& latent, std::size_t step) const {
  require(step < spec_.steps, ErrorKind::kDomain,
          "trajectory step " + std::to_string(step) + " out of range for " + std::to_string(spec_.steps) +
              " steps");
  const Tensor end = latent_equivalent(latent);
  const double a = static_cast<double>(step) / static_cast<double>(spec_.steps - 1);
  Tensor out = latent;
  auto d = out.data();
  const auto e = end.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (1.0 - a) * d[i] + a * e[i];
  return out;
}

std::vector<Tensor> Channel::trajectory(const Tensor& latent) const {
  std::vector<Tensor> states;
  states.reserve(spec_.steps);
  for (std::size_t s = 0; s < spec_.steps; ++s) states.push_back(trajectory_state(latent, s));
  return states;
}

Media Channel::inject_at(const Tensor& latent, std::size_t step,
                         const std::function<Tensor(const Tensor&)>& modifier) const {
  const Tensor state = trajectory_state(latent, step);
  const Tensor modified = modifier(state);
  require(modified.shape() == state.shape(), ErrorKind::kShape, "trajectory modifier changed the shape");
  // The rest of the trajectory is linear in the start point, so a change at
  // any step carries through as the same offset on the start latent.
  Tensor start = latent;
  auto d = start.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += modified[i] - state[i];
  return forward(start);
}

std::optional<PoolOperator> Channel::pool_operator(std::size_t grid) const {
  if (codec_) return codec_->pool_operator(grid);
  if (bridge_) return std::nullopt;
  const std::size_t h = latent_shape_.height;
  const std::size_t w = latent_shape_.width;
  require(grid > 0 && h % grid == 0 && w % grid == 0, ErrorKind::kShape,
          "pool grid " + std::to_string(grid) + " does not divide latent " + to_string(latent_shape_));
  auto pool = [grid](std::size_t n) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid), static_cast<Eigen::Index>(n));
    const std::size_t b = n / grid;
    for (std::size_t i = 0; i < grid; ++i) {
      for (std::size_t k = 0; k < b; ++k) {
        p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i * b + k)) = 1.0 / static_cast<double>(b);
      }
    }
    return p;
  };
  const auto c = static_cast<Eigen::Index>(latent_shape_.channels);
  return PoolOperator{Eigen::MatrixXd::Identity(c, c), pool(h), pool(w)};
}

}  // namespace lmk
