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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lmk/png.hpp"
#include "lmk/registry.hpp"

namespace lmk {

struct PanelSpec {
  std::string method;                    // e.g. "draw_pattern_fft"
  std::optional<std::size_t> channel;    // latent channel to show
  std::optional<std::size_t> num_frames; // video frame strips
};

struct PanelGrid {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::vector<PanelSpec> panels;
};

/// "draw_x,draw_y:channel=2,draw_z:num_frames=4" into panel specs.
std::vector<PanelSpec> parse_panel_list(const std::string& text);

/// All panel method names the renderer knows.
const std::vector<std::string>& panel_methods();

/// Default five-panel list for an algorithm.
std::vector<std::string> default_panels(AlgorithmId id);

inline constexpr std::size_t kPanelSize = 192;   // drawing area per panel
inline constexpr std::size_t kPanelPad = 8;
inline constexpr std::size_t kTitleHeight = 12;

/// Canvas of rows x cols panels, each titled with its method name.
RgbImage render_panels(const VisualizationData& data, const PanelGrid& grid);
void render_panels(const VisualizationData& data, const PanelGrid& grid, const std::filesystem::path& out);

/// Full-resolution picture of one media frame (first three channels as RGB).
RgbImage media_image(const Media& media, std::size_t frame = 0);

/// Diverging blue-white-red colour for v in [-1, 1].
Rgb diverging_color(double v);

}  // namespace lmk
