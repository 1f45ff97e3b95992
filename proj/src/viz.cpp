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

#include "lmk/viz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "lmk/error.hpp"
#include "lmk/spectral.hpp"

namespace lmk {
namespace {

struct Box {
  RgbImage& img;
  std::size_t x0;
  std::size_t y0;
  std::size_t size;
};

// Nearest-neighbour draw of an h x w field, centered in the box with its aspect kept.
void draw_field(const Box& b, std::size_t h, std::size_t w, const std::function<Rgb(std::size_t, std::size_t)>& at) {
  const double scale = std::min(static_cast<double>(b.size) / static_cast<double>(w),
                                static_cast<double>(b.size) / static_cast<double>(h));
  const auto dw = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(static_cast<double>(w) * scale)));
  const auto dh = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(static_cast<double>(h) * scale)));
  const std::size_t ox = b.x0 + (b.size - dw) / 2;
  const std::size_t oy = b.y0 + (b.size - dh) / 2;
  for (std::size_t y = 0; y < dh; ++y) {
    for (std::size_t x = 0; x < dw; ++x) b.img.set(ox + x, oy + y, at(y * h / dh, x * w / dw));
  }
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

Rgb gray(double t) {
  const auto v = to_byte(255.0 * std::clamp(t, 0.0, 1.0));
  return {v, v, v};
}

// Symmetric range about zero so the sign of every value stays readable.
void draw_heatmap(const Box& b, std::span<const double> plane, std::size_t h, std::size_t w) {
  double m = 0.0;
  for (const double v : plane) m = std::max(m, std::abs(v));
  draw_field(b, h, w, [&](std::size_t i, std::size_t j) { return diverging_color(m > 0.0 ? plane[i * w + j] / m : 0.0); });
}

void draw_log_magnitude(const Box& b, const SpectralPlane& s, const FourierMask* mask = nullptr) {
  std::vector<double> mag(s.data.size());
  double m = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag[i] = (mask == nullptr || mask->cells[i]) ? std::log1p(std::abs(s.data[i])) : 0.0;
    m = std::max(m, mag[i]);
  }
  draw_field(b, s.height, s.width, [&](std::size_t i, std::size_t j) { return gray(m > 0.0 ? mag[i * s.width + j] / m : 0.0); });
}

void draw_bits(const Box& b, const Bits& bits, const Shape& shape) {
  // Channels of the message tile side by side.
  const std::size_t h = shape.height;
  const std::size_t w = shape.width * shape.channels;
  require(bits.size() == shape.frame_size(), ErrorKind::kShape, "bit grid does not match its shape");
  draw_field(b, h, w, [&](std::size_t i, std::size_t j) {
    const std::size_t c = j / shape.width;
    const bool on = bits[(c * shape.height + i) * shape.width + j % shape.width] != 0;
    return on ? Rgb{255, 255, 255} : Rgb{0, 0, 0};
  });
}

void draw_media_frame(const Box& b, const Tensor& pixels, std::size_t t) {
  const Shape& s = pixels.shape();
  draw_field(b, s.height, s.width, [&](std::size_t i, std::size_t j) {
    if (s.channels >= 3) {
      return Rgb{to_byte(pixels.at(t, 0, i, j)), to_byte(pixels.at(t, 1, i, j)), to_byte(pixels.at(t, 2, i, j))};
    }
    const auto v = to_byte(pixels.at(t, 0, i, j));
    return Rgb{v, v, v};
  });
}

void draw_histograms(const Box& b, const std::vector<double>& a, const std::vector<double>& c) {
  constexpr std::size_t kBins = 24;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto* v : {&a, &c}) {
    for (const double x : *v) {
      lo = first ? x : std::min(lo, x);
      hi = first ? x : std::max(hi, x);
      first = false;
    }
  }
  if (hi <= lo) hi = lo + 1.0;
  auto counts = [&](const std::vector<double>& v) {
    std::vector<std::size_t> n(kBins, 0);
    for (const double x : v) {
      ++n[std::min(kBins - 1, static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(kBins)))];
    }
    return n;
  };
  const auto na = counts(a);
  const auto nc = counts(c);
  std::size_t top = 1;
  for (std::size_t i = 0; i < kBins; ++i) top = std::max({top, na[i], nc[i]});
  const std::size_t bw = b.size / kBins;
  const std::size_t base = b.y0 + b.size - 1;
  b.img.fill_rect(b.x0, base, b.size, 1, {0, 0, 0});
  for (std::size_t i = 0; i < kBins; ++i) {
    const std::size_t ha = na[i] * (b.size - 2) / top;
    const std::size_t hc = nc[i] * (b.size - 2) / top;
    b.img.fill_rect(b.x0 + i * bw, base - ha, bw / 2, ha, {31, 119, 180});
    b.img.fill_rect(b.x0 + i * bw + bw / 2, base - hc, bw - bw / 2, hc, {255, 127, 14});
  }
}

[[noreturn]] void missing(const std::string& panel, const char* what, AlgorithmId id) {
  fail(ErrorKind::kUnsupported, "panel '" + panel + "' needs " + what + ", which the " +
                                    std::string(algorithm_name(id)) + " visualization data does not have");
}

template <typename T>
const T& need(const std::optional<T>& v, const std::string& panel, const char* what, AlgorithmId id) {
  if (!v) missing(panel, what, id);
  return *v;
}

std::size_t pick_channel(const VisualizationData& d, const PanelSpec& p, const Tensor& t) {
  const std::size_t c = p.channel.value_or(d.pattern_fft ? d.pattern_channel : 0);
  require(c < t.shape().channels, ErrorKind::kDomain,
          "panel '" + p.method + "': channel " + std::to_string(c) + " outside " + to_string(t.shape()));
  return c;
}

SpectralPlane plane_fft(const Tensor& t, std::size_t c) {
  return fft2_centered(t.plane(0, c), t.shape().height, t.shape().width);
}

void require_latent(const Tensor& t, const std::string& panel, const char* what, AlgorithmId id) {
  if (t.size() == 0) missing(panel, what, id);
}

using Painter = std::function<void(const Box&, const VisualizationData&, const PanelSpec&)>;

const std::map<std::string, Painter>& painters() {
  static const std::map<std::string, Painter> table = [] {
    std::map<std::string, Painter> m;
    auto pattern = [](const char* field, bool secondary) {
      return [field, secondary](const Box& b, const VisualizationData& d, const PanelSpec& p) {
        draw_log_magnitude(b, need(secondary ? d.secondary_pattern_fft : d.pattern_fft, p.method, field, d.algorithm));
      };
    };
    m["draw_pattern_fft"] = pattern("a key pattern", false);
    m["draw_ring_pattern_fft"] = pattern("a key pattern", false);
    m["draw_group_pattern_fft"] = pattern("a group pattern", false);
    m["draw_heter_pattern_fft"] = pattern("a second-channel key pattern", true);

    auto latent_fft = [](bool inverted) {
      return [inverted](const Box& b, const VisualizationData& d, const PanelSpec& p) {
        const Tensor& t = inverted ? d.inverted_latent : d.watermarked_latent;
        require_latent(t, p.method, "a latent", d.algorithm);
        draw_log_magnitude(b, plane_fft(t, pick_channel(d, p, t)));
      };
    };
    m["draw_orig_latents_fft"] = latent_fft(false);
    m["draw_inverted_latents_fft"] = latent_fft(true);

    auto inverted_pattern = [](const Box& b, const VisualizationData& d, const PanelSpec& p) {
      const FourierMask& mask = need(d.pattern_mask, p.method, "a pattern mask", d.algorithm);
      require_latent(d.inverted_latent, p.method, "an inverted latent", d.algorithm);
      const std::size_t c = p.channel.value_or(d.pattern_channel);
      require(c < d.inverted_latent.shape().channels, ErrorKind::kDomain, "panel '" + p.method + "': channel out of range");
      draw_log_magnitude(b, plane_fft(d.inverted_latent, c), &mask);
    };
    m["draw_inverted_pattern_fft"] = inverted_pattern;
    m["draw_inverted_group_pattern_fft"] = inverted_pattern;

    auto latent = [](bool inverted) {
      return [inverted](const Box& b, const VisualizationData& d, const PanelSpec& p) {
        const Tensor& t = inverted ? d.inverted_latent : d.watermarked_latent;
        require_latent(t, p.method, "a latent", d.algorithm);
        draw_heatmap(b, t.plane(0, pick_channel(d, p, t)), t.shape().height, t.shape().width);
      };
    };
    m["draw_orig_latents"] = latent(false);
    m["draw_inverted_latents"] = latent(true);

    m["draw_watermarked_image"] = [](const Box& b, const VisualizationData& d, const PanelSpec& p) {
      require_latent(d.media.data, p.method, "media", d.algorithm);
      draw_media_frame(b, display_pixels(d.media), 0);
    };
    m["draw_watermarked_video_frames"] = [](const Box& b, const VisualizationData& d, const PanelSpec& p) {
      require_latent(d.media.data, p.method, "media", d.algorithm);
      const Tensor px = display_pixels(d.media);
      const std::size_t frames = px.shape().frames;
      const std::size_t n = std::clamp<std::size_t>(p.num_frames.value_or(std::min<std::size_t>(frames, 4)), 1, frames);
      const std::size_t cell = b.size / n;
      for (std::size_t k = 0; k < n; ++k) {
        // Evenly spaced frames, first and last included.
        const std::size_t t = n == 1 ? 0 : k * (frames - 1) / (n - 1);
        draw_media_frame({b.img, b.x0 + k * cell, b.y0 + (b.size - cell) / 2, cell}, px, t);
      }
    };

    auto bits = [](bool reconstructed) {
      return [reconstructed](const Box& b, const VisualizationData& d, const PanelSpec& p) {
        const Bits& v = need(reconstructed ? d.reconstructed_bits : d.watermark_bits, p.method,
                             reconstructed ? "reconstructed bits" : "watermark bits", d.algorithm);
        draw_bits(b, v, d.bits_shape);
      };
    };
    m["draw_watermark_bits"] = bits(false);
    m["draw_reconstructed_watermark_bits"] = bits(true);

    auto codeword = [](bool recovered) {
      return [recovered](const Box& b, const VisualizationData& d, const PanelSpec& p) {
        const Tensor& t = need(recovered ? d.recovered_codeword : d.codeword, p.method, "a codeword", d.algorithm);
        const std::size_t c = pick_channel(d, p, t);
        const auto plane = t.plane(0, c);
        const std::size_t w = t.shape().width;
        draw_field(b, t.shape().height, w, [&](std::size_t i, std::size_t j) {
          return plane[i * w + j] > 0.0 ? Rgb{255, 255, 255} : Rgb{0, 0, 0};
        });
      };
    };
    m["draw_codeword"] = codeword(false);
    m["draw_recovered_codeword"] = codeword(true);

    m["draw_embedding_distributions"] = [](const Box& b, const VisualizationData& d, const PanelSpec& p) {
      draw_histograms(b, need(d.reference_embedding, p.method, "semantic embeddings", d.algorithm),
                      need(d.media_embedding, p.method, "semantic embeddings", d.algorithm));
    };
    m["draw_patch_diff"] = [](const Box& b, const VisualizationData& d, const PanelSpec& p) {
      const auto& s = need(d.patch_scores, p.method, "patch scores", d.algorithm);
      draw_field(b, d.patch_grid_h, d.patch_grid_w,
                 [&](std::size_t i, std::size_t j) { return diverging_color(s[i * d.patch_grid_w + j]); });
    };
    return m;
  }();
  return table;
}

}  // namespace

Rgb diverging_color(double v) {
  const double t = std::clamp(v, -1.0, 1.0);
  // White at zero, fading to red (positive) or blue (negative).
  if (t >= 0.0) return {255, to_byte(255.0 * (1.0 - t)), to_byte(255.0 * (1.0 - t))};
  return {to_byte(255.0 * (1.0 + t)), to_byte(255.0 * (1.0 + t)), 255};
}

RgbImage media_image(const Media& media, std::size_t frame) {
  const Tensor px = display_pixels(media);
  const Shape& s = px.shape();
  require(frame < s.frames, ErrorKind::kDomain, "frame " + std::to_string(frame) + " outside media " + to_string(s));
  RgbImage img(s.width, s.height);
  draw_media_frame({img, 0, 0, std::max(s.width, s.height)}, px, frame);
  return img;
}

const std::vector<std::string>& panel_methods() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, _] : painters()) v.push_back(name);
    return v;
  }();
  return names;
}

std::vector<std::string> default_panels(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::kTR:
    case AlgorithmId::kROBIN:
      return {"draw_pattern_fft", "draw_orig_latents_fft", "draw_watermarked_image", "draw_inverted_latents_fft",
              "draw_inverted_pattern_fft"};
    case AlgorithmId::kRI:
      return {"draw_ring_pattern_fft", "draw_orig_latents_fft", "draw_watermarked_image", "draw_inverted_latents_fft",
              "draw_heter_pattern_fft"};
    case AlgorithmId::kWIND:
      return {"draw_group_pattern_fft", "draw_orig_latents_fft", "draw_watermarked_image",
              "draw_inverted_latents_fft", "draw_inverted_group_pattern_fft"};
    case AlgorithmId::kGS:
      return {"draw_watermark_bits", "draw_orig_latents", "draw_watermarked_image", "draw_inverted_latents",
              "draw_reconstructed_watermark_bits"};
    case AlgorithmId::kPRC:
      return {"draw_codeword", "draw_orig_latents", "draw_watermarked_image", "draw_inverted_latents",
              "draw_recovered_codeword"};
    case AlgorithmId::kSEAL:
      return {"draw_embedding_distributions", "draw_orig_latents", "draw_watermarked_image", "draw_inverted_latents",
              "draw_patch_diff"};
    case AlgorithmId::kVideoShield:
      return {"draw_watermark_bits", "draw_orig_latents", "draw_watermarked_video_frames", "draw_inverted_latents",
              "draw_reconstructed_watermark_bits"};
  }
  return {};
}

std::vector<PanelSpec> parse_panel_list(const std::string& text) {
  std::vector<PanelSpec> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    require(!item.empty(), ErrorKind::kUsage, "empty entry in panel list '" + text + "'");
    PanelSpec p;
    std::size_t pos = item.find(':');
    p.method = item.substr(0, pos);
    while (pos != std::string::npos) {
      const std::size_t next = item.find(':', pos + 1);
      const std::string opt = item.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1);
      const std::size_t eq = opt.find('=');
      require(eq != std::string::npos, ErrorKind::kUsage, "panel option '" + opt + "' must be key=value");
      const std::string key = opt.substr(0, eq);
      const std::string val = opt.substr(eq + 1);
      std::size_t used = 0;
      unsigned long n = 0;
      try {
        n = std::stoul(val, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == val.size() && !val.empty(), ErrorKind::kUsage,
              "panel option '" + opt + "' needs a nonnegative integer");
      if (key == "channel") {
        p.channel = n;
      } else if (key == "num_frames") {
        require(n > 0, ErrorKind::kUsage, "num_frames must be positive");
        p.num_frames = n;
      } else {
        fail(ErrorKind::kUsage, "unknown panel option '" + key + "' (expected channel or num_frames)");
      }
      pos = next;
    }
    out.push_back(std::move(p));
    start = end + 1;
  }
  return out;
}

RgbImage render_panels(const VisualizationData& data, const PanelGrid& grid) {
  require(grid.rows > 0 && grid.cols > 0, ErrorKind::kUsage, "panel grid needs at least one row and column");
  require(grid.rows * grid.cols >= grid.panels.size(), ErrorKind::kUsage,
          "grid " + std::to_string(grid.rows) + "x" + std::to_string(grid.cols) + " cannot hold " +
              std::to_string(grid.panels.size()) + " panels");
  const auto& table = painters();
  for (const auto& p : grid.panels) {
    require(table.count(p.method) != 0, ErrorKind::kUsage, "unknown panel method '" + p.method + "'");
  }
  const std::size_t cell_w = kPanelSize + 2 * kPanelPad;
  const std::size_t cell_h = kPanelSize + 2 * kPanelPad + kTitleHeight;
  RgbImage img(grid.cols * cell_w, grid.rows * cell_h);
  for (std::size_t k = 0; k < grid.panels.size(); ++k) {
    const std::size_t x = (k % grid.cols) * cell_w;
    const std::size_t y = (k / grid.cols) * cell_h;
    img.draw_text(x + 2, y + kPanelPad / 2, grid.panels[k].method, {0, 0, 0}, cell_w - 4);
    const Box box{img, x + kPanelPad, y + kPanelPad + kTitleHeight, kPanelSize};
    img.fill_rect(box.x0, box.y0, kPanelSize, kPanelSize, {235, 235, 235});
    table.at(grid.panels[k].method)(box, data, grid.panels[k]);
  }
  return img;
}

void render_panels(const VisualizationData& data, const PanelGrid& grid, const std::filesystem::path& out) {
  write_png(out, render_panels(data, grid));
}

}  // namespace lmk
