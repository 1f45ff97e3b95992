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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lmk/channel.hpp"
#include "lmk/keybased.hpp"
#include "lmk/rng.hpp"
#include "lmk/spectral.hpp"
#include "lmk/tensor.hpp"

namespace lmk {

enum class AlgorithmId { kTR, kRI, kROBIN, kWIND, kGS, kPRC, kSEAL, kVideoShield };

std::string_view algorithm_name(AlgorithmId id);
AlgorithmId parse_algorithm_id(std::string_view name);
const std::vector<AlgorithmId>& all_algorithms();
bool is_pattern_method(AlgorithmId id);

enum class Orientation { kHigherIsWatermarked, kLowerIsWatermarked };

/// Fixed score threshold, or a target false-positive rate (p-value cut for
/// key methods, calibrated null quantile for pattern methods).
struct ThresholdPolicy {
  enum class Kind { kFixed, kTargetFpr };
  Kind kind = Kind::kTargetFpr;
  double value = 0.01;

  friend bool operator==(const ThresholdPolicy&, const ThresholdPolicy&) = default;
};

/// Score cut admitting the largest null false-positive rate <= target_fpr:
/// at most floor(n * target_fpr) nulls land on the watermarked side. Ties at
/// the cut count as watermarked for higher-is-watermarked scores and as not
/// watermarked for lower-is-watermarked ones.
double null_quantile_threshold(std::vector<double> nulls, Orientation orientation, double target_fpr);

/// Verdict for a score under the shared tie rule.
inline bool score_is_watermarked(double score, double threshold, Orientation orientation) {
  return orientation == Orientation::kHigherIsWatermarked ? score >= threshold : score < threshold;
}

std::string_view orientation_name(Orientation orientation);

struct AlgorithmConfig {
  int schema = 1;
  AlgorithmId algorithm = AlgorithmId::kGS;
  Shape latent_shape{1, 4, 64, 64};
  ChannelSpec channel;
  ThresholdPolicy threshold;
  Key256 master_key{};
  std::size_t calibration_nulls = 200;
  nlohmann::json params = nlohmann::json::object();
};

/// Validates shared fields; algorithm params are checked when the system loads.
AlgorithmConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const AlgorithmConfig& config);
AlgorithmConfig load_config_file(const std::filesystem::path& path);

/// $LMK_CONFIG_DIR if set, else "config".
std::filesystem::path config_dir();
std::filesystem::path default_config_path(AlgorithmId id);

struct DetectionResult {
  AlgorithmId algorithm = AlgorithmId::kGS;
  double score = 0.0;
  double threshold = 0.0;
  Orientation orientation = Orientation::kHigherIsWatermarked;
  bool is_watermarked = false;
  std::optional<double> p_value;
  std::optional<std::size_t> matched_key_id;  // Ring-ID key or WIND seed
  std::optional<std::size_t> matched_group;   // WIND group
  std::optional<double> bit_accuracy;
  Bits bits;
  std::vector<double> frame_accuracies;
  std::vector<std::size_t> tampered_frames;
};

nlohmann::json to_json(const DetectionResult& r);

/// Everything the panel renderer can draw for one sample. Fields that do not
/// apply to the algorithm stay empty.
struct VisualizationData {
  AlgorithmId algorithm = AlgorithmId::kGS;
  Tensor watermarked_latent;
  Tensor inverted_latent;
  Media media;
  // Pattern methods: key spectrum, the inverted latent's spectrum on the same
  // channel, and the mask they share.
  std::optional<SpectralPlane> pattern_fft;
  std::optional<SpectralPlane> secondary_pattern_fft;
  std::optional<FourierMask> pattern_mask;
  std::size_t pattern_channel = 0;
  std::size_t secondary_channel = 0;
  // Bit methods.
  std::optional<Bits> watermark_bits;
  std::optional<Bits> reconstructed_bits;
  Shape bits_shape;
  // PRC codeword signs (+1/-1) over the latent.
  std::optional<Tensor> codeword;
  std::optional<Tensor> recovered_codeword;
  // SEAL.
  std::optional<std::vector<double>> reference_embedding;
  std::optional<std::vector<double>> media_embedding;
  std::optional<std::vector<double>> patch_scores;
  std::size_t patch_grid_h = 0;
  std::size_t patch_grid_w = 0;
  DetectionResult detection;
};

class Algorithm;

/// Loaded watermarking system: key material, embedder/detector pair and the
/// channel. Immutable after load and safe to share across threads.
class WatermarkSystem {
 public:
  ~WatermarkSystem();

  AlgorithmId id() const { return config_.algorithm; }
  const AlgorithmConfig& config() const { return config_; }
  const Channel& channel() const { return *channel_; }
  Orientation orientation() const;
  /// Detection threshold in score units.
  double threshold() const { return threshold_; }

  /// The sample's unwatermarked initial latent (shared by all algorithms of one master key).
  Tensor unwatermarked_latent(std::uint64_t sample_id) const;
  Tensor watermarked_latent(std::uint64_t sample_id) const;

  Media generate_watermarked_media(std::uint64_t sample_id) const;
  Media generate_unwatermarked_media(std::uint64_t sample_id) const;
  /// What the sample would look like without the mark: the unwatermarked
  /// media, except for methods that draw their own noise (WIND), where it is
  /// that noise before the pattern. Used for compared-mode quality.
  Media generate_reference_media(std::uint64_t sample_id) const;

  /// Inverts the media through the channel (noise addressed by call_id) and detects.
  DetectionResult detect_watermark_in_media(const Media& media, std::uint64_t call_id = 0) const;
  /// Detection on an already-inverted latent; `media` feeds semantic methods.
  DetectionResult detect_latent(const Tensor& inverted, const Media& media) const;

  VisualizationData visualization_data(std::uint64_t sample_id, const Media& media, std::uint64_t call_id = 0) const;

  nlohmann::json key_json() const;

  /// Null scores used to calibrate a target-FPR threshold (empty otherwise).
  const std::vector<double>& calibration_scores() const { return calibration_; }

  const Algorithm& algorithm() const { return *algorithm_; }

 private:
  friend std::shared_ptr<const WatermarkSystem> load_system(AlgorithmId, const AlgorithmConfig&,
                                                            const nlohmann::json*);
  WatermarkSystem() = default;
  DetectionResult finish(DetectionResult r) const;

  AlgorithmConfig config_;
  std::unique_ptr<Channel> channel_;
  std::unique_ptr<Algorithm> algorithm_;
  double threshold_ = 0.0;
  std::vector<double> calibration_;
};

/// Builds a ready system. `key` (optional) replaces the derived key material
/// with a previously serialized one.
std::shared_ptr<const WatermarkSystem> load_system(AlgorithmId id, const AlgorithmConfig& config,
                                                   const nlohmann::json* key = nullptr);

/// Convenience: config/<ID>.json under config_dir().
std::shared_ptr<const WatermarkSystem> load_system(AlgorithmId id);

}  // namespace lmk
