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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmk/attacks.hpp"
#include "lmk/metrics.hpp"
#include "lmk/registry.hpp"

namespace lmk {

struct SampleDescriptor {
  std::uint64_t sample_id = 0;
  std::optional<std::string> prompt;     // used only by a bridge backend
  std::optional<std::string> reference;  // reference media path
};

struct SampleSet {
  std::vector<SampleDescriptor> samples;

  std::size_t size() const { return samples.size(); }
  /// Ids first .. first + n - 1.
  static SampleSet range(std::size_t n, std::uint64_t first = 0);
};

/// JSONL, one {"sample_id": .., "prompt": .., "reference": ..} per line; at
/// most max_samples entries (0 = no cap). Duplicate ids are rejected.
SampleSet load_sample_set(const std::filesystem::path& path, std::size_t max_samples = 0);

struct ScoreSet {
  std::vector<double> watermarked;
  std::vector<double> nulls;
  Orientation orientation = Orientation::kHigherIsWatermarked;
};

struct SuccessRateReport {
  double threshold = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double tpr = 0.0, fpr = 0.0, tnr = 0.0, fnr = 0.0;
  double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;
};

nlohmann::json to_json(const SuccessRateReport& r);

/// Confusion rates at threshold tau (ties per score_is_watermarked).
SuccessRateReport fundamental_rates(const ScoreSet& scores, double tau);

/// TPR at the null-quantile threshold admitting the largest FPR <= target_fpr.
/// target_fpr = 0 puts the threshold strictly beyond every null.
SuccessRateReport dynamic_tpr_at_fpr(const ScoreSet& scores, double target_fpr);

struct PipelineOptions {
  AttackChain attacks;
  std::uint64_t seed = 0;
  int jobs = 0;           // 0 = all available threads
  bool progress = false;  // progress lines on stderr
};

/// Generate (watermarked or fresh) media, attack, invert, detect. Results are
/// in sample order; any sample failure aborts the run with its context.
std::vector<DetectionResult> run_wmdetect(const WatermarkSystem& system, const SampleSet& samples,
                                          const PipelineOptions& options);
std::vector<DetectionResult> run_uwmdetect(const WatermarkSystem& system, const SampleSet& samples,
                                           const PipelineOptions& options);

std::vector<double> scores_of(const std::vector<DetectionResult>& results);

enum class QualityMode { kCompared, kDirect, kVideo, kGroup, kRepeat, kRef };

QualityMode parse_quality_mode(std::string_view name);
std::string_view quality_mode_name(QualityMode mode);

/// compared: watermarked vs unwatermarked media of the same sample (PSNR, SSIM,
/// MSE); direct: no-reference proxies of the watermarked media (video only);
/// video: proxies of watermarked and unwatermarked videos. Group, repeat and
/// ref need learned metrics and raise an unsupported error.
QualityReport quality_pipeline(const WatermarkSystem& system, const SampleSet& samples, QualityMode mode,
                               int jobs = 0);

nlohmann::json to_json(const QualityReport& report);

/// Report document {algorithm, channel, attacks, n, rates, quality, seed, wall_time_s}.
struct EvaluationReport {
  std::string algorithm;
  std::string channel;
  std::string attacks;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double target_fpr = 0.01;
  std::optional<SuccessRateReport> fixed;    // at the system threshold
  std::optional<SuccessRateReport> dynamic;  // at target_fpr over the run's nulls
  std::optional<MeanStd> watermarked_scores;
  std::optional<MeanStd> null_scores;
  std::optional<QualityReport> quality;
  std::optional<double> wall_time_s;
};

nlohmann::json to_json(const EvaluationReport& report);

}  // namespace lmk
