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

#include <filesystem>
#include <fstream>
#include <iterator>

#include <gtest/gtest.h>

#include "lmk/error.hpp"
#include "lmk/png.hpp"
#include "lmk/viz.hpp"
#include "test_configs.hpp"

namespace lmk {
namespace {

using testing::small_config;

VisualizationData data_for(AlgorithmId id, std::uint64_t sample = 0) {
  const auto system = load_system(id, small_config(id));
  return system->visualization_data(sample, system->generate_watermarked_media(sample));
}

PanelGrid grid_of(const std::vector<std::string>& methods, std::size_t rows, std::size_t cols) {
  PanelGrid g;
  g.rows = rows;
  g.cols = cols;
  for (const auto& m : methods) g.panels.push_back({m, std::nullopt, std::nullopt});
  return g;
}

std::vector<char> file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(Panels, ParseOptions) {
  const auto p = parse_panel_list("draw_pattern_fft,draw_inverted_latents:channel=2,draw_watermarked_video_frames:num_frames=4");
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].method, "draw_pattern_fft");
  EXPECT_FALSE(p[0].channel.has_value());
  EXPECT_EQ(*p[1].channel, 2u);
  EXPECT_EQ(*p[2].num_frames, 4u);
  EXPECT_THROW(parse_panel_list("draw_x:colour=red"), Error);
}

TEST(Panels, DefaultsUseKnownMethods) {
  for (const AlgorithmId id : all_algorithms()) {
    const auto d = default_panels(id);
    EXPECT_EQ(d.size(), 5u);
    for (const auto& m : d) {
      EXPECT_NE(std::find(panel_methods().begin(), panel_methods().end(), m), panel_methods().end()) << m;
    }
  }
  EXPECT_EQ(default_panels(AlgorithmId::kTR),
            (std::vector<std::string>{"draw_pattern_fft", "draw_orig_latents_fft", "draw_watermarked_image",
                                      "draw_inverted_latents_fft", "draw_inverted_pattern_fft"}));
}

TEST(Panels, BundlesCarryTheirAlgorithmsFields) {
  const auto tr = data_for(AlgorithmId::kTR);
  EXPECT_TRUE(tr.pattern_fft.has_value());
  EXPECT_TRUE(tr.pattern_mask.has_value());
  EXPECT_FALSE(tr.watermark_bits.has_value());
  const auto gs = data_for(AlgorithmId::kGS);
  EXPECT_TRUE(gs.watermark_bits.has_value());
  EXPECT_TRUE(gs.reconstructed_bits.has_value());
  EXPECT_FALSE(gs.pattern_fft.has_value());
}

TEST(Panels, AbsentFieldIsAnError) {
  const auto tr = data_for(AlgorithmId::kTR);
  try {
    render_panels(tr, grid_of({"draw_watermark_bits"}, 1, 1));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("draw_watermark_bits"), std::string::npos) << e.what();
  }
  EXPECT_THROW(render_panels(tr, grid_of({"draw_nothing"}, 1, 1)), Error);
  EXPECT_THROW(render_panels(tr, grid_of(default_panels(AlgorithmId::kTR), 1, 4)), Error);
}

TEST(Panels, TreeRingStripDimensions) {
  const auto path = std::filesystem::temp_directory_path() / "lmk_viz_tr.png";
  render_panels(data_for(AlgorithmId::kTR), grid_of(default_panels(AlgorithmId::kTR), 1, 5), path);
  ASSERT_TRUE(std::filesystem::exists(path));
  const auto bytes = file_bytes(path);
  ASSERT_GT(bytes.size(), 24u);
  // IHDR width and height, big-endian, at offsets 16 and 20.
  auto be32 = [&](std::size_t at) {
    return (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at])) << 24) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 1])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 2])) << 8) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 3]));
  };
  EXPECT_EQ(be32(16), 5 * (kPanelSize + 2 * kPanelPad));
  EXPECT_EQ(be32(20), kPanelSize + 2 * kPanelPad + kTitleHeight);
  std::filesystem::remove(path);
}

TEST(Panels, AllOnesBitGridIsWhite) {
  auto gs = data_for(AlgorithmId::kGS);
  gs.bits_shape = {1, 1, 8, 8};
  gs.watermark_bits = Bits(64, 1);
  const RgbImage img = render_panels(gs, grid_of({"draw_watermark_bits"}, 1, 1));
  const std::size_t x0 = kPanelPad, y0 = kPanelPad + kTitleHeight;
  for (std::size_t y = y0; y < y0 + kPanelSize; y += 7) {
    for (std::size_t x = x0; x < x0 + kPanelSize; x += 7) {
      const Rgb c = img.get(x, y);
      ASSERT_EQ(c.r + c.g + c.b, 3 * 255) << x << "," << y;
    }
  }
}

TEST(Panels, RenderingIsByteDeterministic) {
  for (const AlgorithmId id : {AlgorithmId::kRI, AlgorithmId::kSEAL, AlgorithmId::kVideoShield}) {
    const auto grid = grid_of(default_panels(id), 1, 5);
    EXPECT_EQ(encode_png(render_panels(data_for(id), grid)), encode_png(render_panels(data_for(id), grid)));
  }
}

TEST(Png, SignatureAndColors) {
  const auto bytes = encode_png(RgbImage(3, 2, {10, 20, 30}));
  ASSERT_GT(bytes.size(), 8u);
  EXPECT_EQ(bytes[1], 'P');
  EXPECT_EQ(bytes[2], 'N');
  EXPECT_EQ(bytes[3], 'G');
  const Rgb lo = diverging_color(-1.0), mid = diverging_color(0.0), hi = diverging_color(1.0);
  EXPECT_GT(lo.b, lo.r);
  EXPECT_GT(hi.r, hi.b);
  EXPECT_EQ(mid.r, 255);
  EXPECT_EQ(mid.b, 255);
}

}  // namespace
}  // namespace lmk
