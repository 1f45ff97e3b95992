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

#include "lmk/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lmk/error.hpp"
#include "lmk/jpeg.hpp"
#include "lmk/kernels.hpp"
#include "lmk/rng.hpp"

namespace lmk {
namespace {

struct KindInfo {
  AttackKind kind;
  const char* token;
  std::size_t min_params;
  std::size_t max_params;
};

constexpr KindInfo kKinds[] = {
    {AttackKind::kRotation, "rot", 1, 1},       {AttackKind::kCropScale, "crop", 1, 1},
    {AttackKind::kGaussianNoise, "noise", 1, 1}, {AttackKind::kGaussianBlur, "blur", 1, 2},
    {AttackKind::kJpeg, "jpeg", 1, 1},          {AttackKind::kColorJitter, "jitter", 3, 3},
    {AttackKind::kFrameAverage, "favg", 1, 1},  {AttackKind::kFrameSwap, "fswap", 0, 1},
    {AttackKind::kMpegProxy, "mpeg", 1, 2},
};

const KindInfo& info(AttackKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  fail(ErrorKind::kAttack, "unknown attack kind");
}

double parse_param(const std::string& text, const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(!text.empty() && used == text.size() && std::isfinite(v), ErrorKind::kAttack,
          "bad parameter '" + text + "' in attack '" + token + "'");
  return v;
}

bool parse_pair(const std::string& text, std::pair<std::size_t, std::size_t>& out) {
  const auto dash = text.find('-');
  if (dash == std::string::npos || dash == 0) return false;
  try {
    std::size_t u1 = 0, u2 = 0;
    const auto a = std::stoul(text.substr(0, dash), &u1);
    const auto b = std::stoul(text.substr(dash + 1), &u2);
    if (u1 != dash || u2 != text.size() - dash - 1) return false;
    out = {a, b};
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool is_int(double v) { return v == std::floor(v); }

std::vector<double> gaussian_taps(int k, double sigma) {
  std::vector<double> taps(static_cast<std::size_t>(k));
  const int r = k / 2;
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    taps[static_cast<std::size_t>(i + r)] = v;
    sum += v;
  }
  for (double& v : taps) v /= sum;
  return taps;
}

// Per-plane bilinear remap over every frame and channel.
Tensor remap(const Tensor& in, const kernels::AffineMap& map, kernels::Border border) {
  const Shape& s = in.shape();
  Tensor out(s);
  for (std::size_t t = 0; t < s.frames; ++t) {
    for (std::size_t c = 0; c < s.channels; ++c) {
      kernels::resample_bilinear(in.plane(t, c), s.height, s.width, out.plane(t, c), s.height, s.width, map,
                                 border);
    }
  }
  return out;
}

void clamp_pixels(Tensor& t) {
  for (double& v : t.data()) v = std::clamp(v, 0.0, 255.0);
}

double luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

Tensor color_jitter(const Tensor& in, double brightness, double contrast, double saturation) {
  const Shape& s = in.shape();
  require(s.channels == 3, ErrorKind::kAttack, "color jitter needs RGB media");
  Tensor out(s);
  const std::size_t n = s.plane_size();
  for (std::size_t t = 0; t < s.frames; ++t) {
    const auto r = in.plane(t, 0);
    const auto g = in.plane(t, 1);
    const auto b = in.plane(t, 2);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += luma(r[i], g[i], b[i]);
    mean /= static_cast<double>(n);
    auto ro = out.plane(t, 0);
    auto go = out.plane(t, 1);
    auto bo = out.plane(t, 2);
    for (std::size_t i = 0; i < n; ++i) {
      const double r1 = ((r[i] - mean) * contrast + mean) * brightness;
      const double g1 = ((g[i] - mean) * contrast + mean) * brightness;
      const double b1 = ((b[i] - mean) * contrast + mean) * brightness;
      const double y = luma(r1, g1, b1);
      ro[i] = std::clamp(saturation * r1 + (1.0 - saturation) * y, 0.0, 255.0);
      go[i] = std::clamp(saturation * g1 + (1.0 - saturation) * y, 0.0, 255.0);
      bo[i] = std::clamp(saturation * b1 + (1.0 - saturation) * y, 0.0, 255.0);
    }
  }
  return out;
}

Tensor frame_average(const Tensor& in, std::size_t window) {
  const Shape& s = in.shape();
  Tensor out(s);
  const std::size_t half = window / 2;
  for (std::size_t t = 0; t < s.frames; ++t) {
    const std::size_t lo = t >= half ? t - half : 0;
    const std::size_t hi = std::min(s.frames - 1, t + half);
    auto dst = out.frame(t);
    for (std::size_t k = lo; k <= hi; ++k) {
      const auto src = in.frame(k);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    const double inv = 1.0 / static_cast<double>(hi - lo + 1);
    for (double& v : dst) v *= inv;
  }
  return out;
}

Tensor mpeg_proxy(const Tensor& in, int quality, std::size_t keyframe_interval) {
  const Shape& s = in.shape();
  Tensor out(s);
  Tensor prev;
  for (std::size_t t = 0; t < s.frames; ++t) {
    const Tensor frame = in.frame_tensor(t);
    Tensor decoded;
    if (t % keyframe_interval == 0) {
      decoded = jpeg_roundtrip(frame, quality);
    } else {
      Tensor delta = frame;
      for (std::size_t i = 0; i < delta.size(); ++i) delta[i] -= prev[i];
      decoded = jpeg_quantize_residual(delta, quality);
      for (std::size_t i = 0; i < decoded.size(); ++i) decoded[i] = std::clamp(decoded[i] + prev[i], 0.0, 255.0);
    }
    out.set_frame(t, decoded);
    prev = std::move(decoded);
  }
  return out;
}

}  // namespace

bool is_video_attack(AttackKind kind) {
  return kind == AttackKind::kFrameAverage || kind == AttackKind::kFrameSwap || kind == AttackKind::kMpegProxy;
}

void validate(const AttackSpec& a) {
  const auto& k = info(a.kind);
  const std::string name = k.token;
  if (a.kind == AttackKind::kFrameSwap && !a.swap_pairs.empty()) {
    require(a.params.empty(), ErrorKind::kAttack, "fswap takes either a count or explicit pairs, not both");
    for (const auto& [x, y] : a.swap_pairs) {
      require(x != y, ErrorKind::kAttack, "fswap pair swaps a frame with itself");
    }
    return;
  }
  require(a.params.size() >= k.min_params && a.params.size() <= k.max_params, ErrorKind::kAttack,
          "attack '" + name + "' takes " + std::to_string(k.min_params) + ".." + std::to_string(k.max_params) +
              " parameters, got " + std::to_string(a.params.size()));
  const auto& p = a.params;
  switch (a.kind) {
    case AttackKind::kRotation: break;
    case AttackKind::kCropScale:
      require(p[0] > 0.0 && p[0] <= 1.0, ErrorKind::kAttack, "crop ratio must be in (0, 1]");
      break;
    case AttackKind::kGaussianNoise:
      require(p[0] >= 0.0, ErrorKind::kAttack, "noise sigma must be >= 0");
      break;
    case AttackKind::kGaussianBlur:
      require(is_int(p[0]) && p[0] >= 1 && static_cast<long>(p[0]) % 2 == 1, ErrorKind::kAttack,
              "blur kernel size must be a positive odd integer");
      if (p.size() > 1) require(p[1] > 0.0, ErrorKind::kAttack, "blur sigma must be > 0");
      break;
    case AttackKind::kJpeg:
    case AttackKind::kMpegProxy:
      require(is_int(p[0]) && p[0] >= 1 && p[0] <= 100, ErrorKind::kAttack, name + " quality must be an integer in [1, 100]");
      if (p.size() > 1) {
        require(is_int(p[1]) && p[1] >= 1, ErrorKind::kAttack, "mpeg keyframe interval must be a positive integer");
      }
      break;
    case AttackKind::kColorJitter:
      require(p[0] >= 0.0 && p[1] >= 0.0 && p[2] >= 0.0, ErrorKind::kAttack, "jitter factors must be >= 0");
      break;
    case AttackKind::kFrameAverage:
      require(is_int(p[0]) && p[0] >= 1 && static_cast<long>(p[0]) % 2 == 1, ErrorKind::kAttack,
              "frame average window must be a positive odd integer");
      break;
    case AttackKind::kFrameSwap:
      if (!p.empty()) require(is_int(p[0]) && p[0] >= 0, ErrorKind::kAttack, "fswap count must be a nonnegative integer");
      break;
  }
}

AttackChain parse_attack_chain(const std::string& text) {
  AttackChain chain;
  if (text.empty() || text == "none") return chain;
  std::stringstream ss(text);
  std::string token;
  std::string current;
  while (std::getline(ss, token, ',')) {
    require(!token.empty(), ErrorKind::kAttack, "empty token in attack chain '" + text + "'");
    const auto colon = token.find(':');
    std::string value;
    if (colon != std::string::npos) {
      const std::string name = token.substr(0, colon);
      const KindInfo* found = nullptr;
      for (const auto& k : kKinds) {
        if (name == k.token) found = &k;
      }
      require(found != nullptr, ErrorKind::kAttack, "unknown attack '" + token + "'");
      chain.push_back({found->kind, {}, {}});
      current = token;
      value = token.substr(colon + 1);
    } else {
      require(!chain.empty(), ErrorKind::kAttack, "attack parameter '" + token + "' precedes any attack");
      value = token;
    }
    AttackSpec& a = chain.back();
    std::pair<std::size_t, std::size_t> pair;
    if (a.kind == AttackKind::kFrameSwap && parse_pair(value, pair)) {
      a.swap_pairs.push_back(pair);
    } else {
      a.params.push_back(parse_param(value, current));
    }
  }
  for (const auto& a : chain) validate(a);
  return chain;
}

std::string to_string(const AttackSpec& a) {
  std::string s = std::string(info(a.kind).token) + ":";
  bool first = true;
  for (double v : a.params) {
    s += (first ? "" : ",") + fmt(v);
    first = false;
  }
  for (const auto& [x, y] : a.swap_pairs) {
    s += (first ? "" : ",") + std::to_string(x) + "-" + std::to_string(y);
    first = false;
  }
  return s;
}

std::string to_string(const AttackChain& chain) {
  if (chain.empty()) return "none";
  std::string s;
  for (const auto& a : chain) s += (s.empty() ? "" : ",") + to_string(a);
  return s;
}

Media apply_attack(const AttackSpec& a, const Media& media, std::uint64_t seed) {
  validate(a);
  const Shape& s = media.data.shape();
  const auto& p = a.params;
  if (is_video_attack(a.kind)) {
    require(s.frames >= 2, ErrorKind::kAttack,
            std::string("video attack '") + info(a.kind).token + "' needs multi-frame media, got " + to_string(s));
  }
  if (!is_video_attack(a.kind) || a.kind == AttackKind::kMpegProxy) {
    require(media.kind == MediaKind::kImage, ErrorKind::kAttack,
            std::string("attack '") + info(a.kind).token + "' needs pixel media but the channel passes latents through");
  }

  Media out{media.kind, {}};
  const double cy = (static_cast<double>(s.height) - 1.0) / 2.0;
  const double cx = (static_cast<double>(s.width) - 1.0) / 2.0;
  switch (a.kind) {
    case AttackKind::kRotation: {
      const double th = p[0] * std::numbers::pi / 180.0;
      const double c = std::cos(th);
      const double sn = std::sin(th);
      kernels::AffineMap m;
      m.xx = c;
      m.xy = sn;
      m.x0 = cx - c * cx - sn * cy;
      m.yx = -sn;
      m.yy = c;
      m.y0 = cy + sn * cx - c * cy;
      out.data = remap(media.data, m, kernels::Border::kZero);
      break;
    }
    case AttackKind::kCropScale: {
      kernels::AffineMap m;
      m.xx = p[0];
      m.x0 = cx * (1.0 - p[0]);
      m.yy = p[0];
      m.y0 = cy * (1.0 - p[0]);
      out.data = remap(media.data, m, kernels::Border::kClamp);
      break;
    }
    case AttackKind::kGaussianNoise: {
      out.data = media.data;
      const SeededRng rng(derive_key(Key256{}, "attack/noise"), seed);
      auto d = out.data.data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += p[0] * rng.normal_at(i);
      clamp_pixels(out.data);
      break;
    }
    case AttackKind::kGaussianBlur: {
      const int k = static_cast<int>(p[0]);
      const double sigma = p.size() > 1 ? p[1] : 0.3 * ((k - 1) * 0.5 - 1.0) + 0.8;
      const auto taps = gaussian_taps(k, sigma);
      out.data = Tensor(s);
      for (std::size_t t = 0; t < s.frames; ++t) {
        for (std::size_t c = 0; c < s.channels; ++c) {
          kernels::convolve_separable(media.data.plane(t, c), out.data.plane(t, c), s.height, s.width, taps, taps);
        }
      }
      break;
    }
    case AttackKind::kJpeg:
      out.data = jpeg_roundtrip(media.data, static_cast<int>(p[0]));
      break;
    case AttackKind::kColorJitter:
      out.data = color_jitter(media.data, p[0], p[1], p[2]);
      break;
    case AttackKind::kFrameAverage:
      out.data = frame_average(media.data, static_cast<std::size_t>(p[0]));
      break;
    case AttackKind::kFrameSwap: {
      std::vector<std::pair<std::size_t, std::size_t>> pairs = a.swap_pairs;
      if (pairs.empty()) {
        const auto count = p.empty() ? std::size_t{1} : static_cast<std::size_t>(p[0]);
        require(2 * count <= s.frames, ErrorKind::kAttack,
                "cannot draw " + std::to_string(count) + " disjoint swaps from " + std::to_string(s.frames) + " frames");
        const auto perm = keyed_permutation(SeededRng(derive_key(Key256{}, "attack/swap"), seed), s.frames);
        for (std::size_t i = 0; i < count; ++i) pairs.emplace_back(perm[2 * i], perm[2 * i + 1]);
      }
      out.data = media.data;
      for (const auto& [x, y] : pairs) {
        require(x < s.frames && y < s.frames, ErrorKind::kAttack,
                "fswap pair " + std::to_string(x) + "-" + std::to_string(y) + " outside " + std::to_string(s.frames) + " frames");
        const Tensor fx = out.data.frame_tensor(x);
        out.data.set_frame(x, out.data.frame_tensor(y));
        out.data.set_frame(y, fx);
      }
      break;
    }
    case AttackKind::kMpegProxy:
      out.data = mpeg_proxy(media.data, static_cast<int>(p[0]), p.size() > 1 ? static_cast<std::size_t>(p[1]) : 8);
      break;
  }
  return out;
}

Media apply_chain(const AttackChain& chain, const Media& media, std::uint64_t seed) {
  Media m = media;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    // Separate sub-seeds so two noise attacks in a chain are independent.
    m = apply_attack(chain[i], m, seed * 1000003ULL + i);
  }
  return m;
}

}  // namespace lmk
