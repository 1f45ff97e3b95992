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

#include "lmk/registry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "algorithm.hpp"
#include "json_fields.hpp"
#include "lmk/error.hpp"
#include "lmk/parallel.hpp"

namespace lmk {

using nlohmann::json;

namespace {

constexpr std::uint64_t kCalibrationCallBase = std::uint64_t{1} << 62;
constexpr const char* kDefaultMasterKey = "4c6174656e744d61726b2064656661756c74206d6173746572206b6579203031";

struct Named {
  AlgorithmId id;
  std::string_view name;
};

constexpr Named kNames[] = {
    {AlgorithmId::kTR, "TR"},     {AlgorithmId::kRI, "RI"},   {AlgorithmId::kROBIN, "ROBIN"},
    {AlgorithmId::kWIND, "WIND"}, {AlgorithmId::kGS, "GS"},   {AlgorithmId::kPRC, "PRC"},
    {AlgorithmId::kSEAL, "SEAL"}, {AlgorithmId::kVideoShield, "VideoShield"},
};

ThresholdPolicy parse_threshold(const json& j) {
  detail::Fields f(j, "threshold");
  ThresholdPolicy t;
  const auto policy = f.need<std::string>("policy");
  if (policy == "fixed") {
    t.kind = ThresholdPolicy::Kind::kFixed;
    t.value = f.need<double>("value");
    require(std::isfinite(t.value), ErrorKind::kConfig, "threshold.value: must be finite");
  } else if (policy == "target_fpr") {
    t.kind = ThresholdPolicy::Kind::kTargetFpr;
    t.value = f.get<double>("value", 0.01);
    require(t.value > 0.0 && t.value < 1.0, ErrorKind::kConfig, "threshold.value: target FPR must be in (0, 1)");
  } else {
    fail(ErrorKind::kConfig, "threshold.policy: expected 'fixed' or 'target_fpr', got '" + policy + "'");
  }
  f.finish();
  return t;
}

}  // namespace

std::string_view algorithm_name(AlgorithmId id) {
  for (const auto& n : kNames) {
    if (n.id == id) return n.name;
  }
  return "?";
}

AlgorithmId parse_algorithm_id(std::string_view name) {
  for (const auto& n : kNames) {
    if (n.name == name) return n.id;
  }
  fail(ErrorKind::kUnknownAlgorithm, "unknown algorithm '" + std::string(name) +
                                         "' (expected TR, RI, ROBIN, WIND, GS, PRC, SEAL or VideoShield)");
}

const std::vector<AlgorithmId>& all_algorithms() {
  static const std::vector<AlgorithmId> ids = [] {
    std::vector<AlgorithmId> v;
    for (const auto& n : kNames) v.push_back(n.id);
    return v;
  }();
  return ids;
}

bool is_pattern_method(AlgorithmId id) {
  return id == AlgorithmId::kTR || id == AlgorithmId::kRI || id == AlgorithmId::kROBIN || id == AlgorithmId::kWIND;
}

std::string_view orientation_name(Orientation o) {
  return o == Orientation::kHigherIsWatermarked ? "higher_is_watermarked" : "lower_is_watermarked";
}

double null_quantile_threshold(std::vector<double> nulls, Orientation orientation, double target_fpr) {
  require(!nulls.empty(), ErrorKind::kDomain, "threshold calibration needs at least one null score");
  require(target_fpr >= 0.0 && target_fpr < 1.0, ErrorKind::kDomain, "target FPR must be in [0, 1)");
  const auto n = nulls.size();
  const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * target_fpr + 1e-9));
  if (orientation == Orientation::kHigherIsWatermarked) {
    // Descending: only nulls strictly above the (m+1)-th largest pass.
    std::sort(nulls.begin(), nulls.end(), std::greater<>());
    return std::nextafter(nulls[m], std::numeric_limits<double>::infinity());
  }
  // Ascending: only nulls strictly below the (m+1)-th smallest pass.
  std::sort(nulls.begin(), nulls.end());
  return nulls[m];
}

// Config ---------------------------------------------------------------------

AlgorithmConfig parse_config(const json& j) {
  detail::Fields f(j, "config");
  AlgorithmConfig c;
  c.schema = f.need<int>("schema");
  require(c.schema == 1, ErrorKind::kConfig, "config.schema: unsupported version " + std::to_string(c.schema));
  c.algorithm = parse_algorithm_id(f.need<std::string>("algorithm"));
  if (f.has("latent_shape")) {
    c.latent_shape = detail::shape_from_json(f.raw("latent_shape"), "config.latent_shape");
  }
  require_latent_shape(c.latent_shape);
  if (f.has("channel")) c.channel = channel_spec_from_json(f.raw("channel"));
  if (f.has("threshold")) c.threshold = parse_threshold(f.raw("threshold"));
  const auto master = f.get<std::string>("master_key", kDefaultMasterKey);
  try {
    c.master_key = key_from_hex(master);
  } catch (const Error& e) {
    fail(ErrorKind::kConfig, std::string("config.master_key: ") + e.what());
  }
  c.calibration_nulls = f.get<std::size_t>("calibration_nulls", c.calibration_nulls);
  require(c.calibration_nulls >= 1, ErrorKind::kConfig, "config.calibration_nulls: must be at least 1");
  if (f.has("params")) {
    c.params = f.raw("params");
    require(c.params.is_object(), ErrorKind::kConfig, "config.params: expected a JSON object");
  }
  f.finish();
  return c;
}

json config_to_json(const AlgorithmConfig& c) {
  json t = {{"policy", c.threshold.kind == ThresholdPolicy::Kind::kFixed ? "fixed" : "target_fpr"},
            {"value", c.threshold.value}};
  return {{"schema", c.schema},
          {"algorithm", algorithm_name(c.algorithm)},
          {"latent_shape", detail::shape_to_json(c.latent_shape)},
          {"channel", channel_spec_to_json(c.channel)},
          {"threshold", t},
          {"master_key", key_to_hex(c.master_key)},
          {"calibration_nulls", c.calibration_nulls},
          {"params", c.params}};
}

AlgorithmConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIo, "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kConfig, path.string() + ": invalid JSON: " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::filesystem::path config_dir() {
  const char* env = std::getenv("LMK_CONFIG_DIR");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("config");
}

std::filesystem::path default_config_path(AlgorithmId id) {
  return config_dir() / (std::string(algorithm_name(id)) + ".json");
}

// Results --------------------------------------------------------------------

json to_json(const DetectionResult& r) {
  json j = {{"algorithm", algorithm_name(r.algorithm)},
            {"score", r.score},
            {"threshold", r.threshold},
            {"orientation", orientation_name(r.orientation)},
            {"is_watermarked", r.is_watermarked}};
  if (r.p_value) j["p_value"] = *r.p_value;
  if (r.matched_key_id) j["matched_key_id"] = *r.matched_key_id;
  if (r.matched_group) j["matched_group"] = *r.matched_group;
  if (r.bit_accuracy) j["bit_accuracy"] = *r.bit_accuracy;
  if (!r.bits.empty()) {
    j["num_bits"] = r.bits.size();
    j["bits"] = bits_to_hex(r.bits);
  }
  if (!r.frame_accuracies.empty()) {
    j["frame_accuracies"] = r.frame_accuracies;
    j["tampered_frames"] = r.tampered_frames;
  }
  return j;
}

// System ---------------------------------------------------------------------

WatermarkSystem::~WatermarkSystem() = default;

Orientation WatermarkSystem::orientation() const { return algorithm_->orientation(); }

Tensor WatermarkSystem::unwatermarked_latent(std::uint64_t sample_id) const {
  return gaussian_latent(SeededRng(derive_key(config_.master_key, "unwatermarked"), sample_id), config_.latent_shape);
}

Tensor WatermarkSystem::watermarked_latent(std::uint64_t sample_id) const {
  return algorithm_->watermarked_latent(sample_id, unwatermarked_latent(sample_id));
}

Media WatermarkSystem::generate_watermarked_media(std::uint64_t sample_id) const {
  try {
    return algorithm_->generate(sample_id, unwatermarked_latent(sample_id));
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(algorithm_name(id())) + " sample " + std::to_string(sample_id) + ": " + e.what());
  }
}

Media WatermarkSystem::generate_reference_media(std::uint64_t sample_id) const {
  try {
    return channel_->forward(algorithm_->reference_latent(sample_id, unwatermarked_latent(sample_id)));
  } catch (const Error& e) {
    throw Error(e.kind(), "reference sample " + std::to_string(sample_id) + ": " + e.what());
  }
}

Media WatermarkSystem::generate_unwatermarked_media(std::uint64_t sample_id) const {
  try {
    return channel_->forward(unwatermarked_latent(sample_id));
  } catch (const Error& e) {
    throw Error(e.kind(), "unwatermarked sample " + std::to_string(sample_id) + ": " + e.what());
  }
}

DetectionResult WatermarkSystem::finish(DetectionResult r) const {
  r.algorithm = id();
  r.orientation = orientation();
  r.threshold = threshold_;
  if (config_.threshold.kind == ThresholdPolicy::Kind::kTargetFpr && algorithm_->reports_p_value()) {
    r.is_watermarked = r.p_value.value_or(1.0) < config_.threshold.value;
  } else {
    r.is_watermarked = score_is_watermarked(r.score, threshold_, r.orientation);
  }
  return r;
}

DetectionResult WatermarkSystem::detect_latent(const Tensor& inverted, const Media& media) const {
  require(inverted.shape() == config_.latent_shape, ErrorKind::kShape,
          "inverted latent " + to_string(inverted.shape()) + " does not match " + to_string(config_.latent_shape));
  return finish(algorithm_->detect(inverted, media));
}

DetectionResult WatermarkSystem::detect_watermark_in_media(const Media& media, std::uint64_t call_id) const {
  require(media.kind == channel_->media_kind(), ErrorKind::kShape,
          std::string("media kind does not match channel ") + describe(channel_->spec()));
  if (const auto expected = channel_->media_shape()) {
    require(media.data.shape() == *expected, ErrorKind::kShape,
            "media " + to_string(media.data.shape()) + " does not match expected " + to_string(*expected));
  }
  return detect_latent(channel_->invert(media, call_id), media);
}

VisualizationData WatermarkSystem::visualization_data(std::uint64_t sample_id, const Media& media,
                                                      std::uint64_t call_id) const {
  VisualizationData d;
  d.algorithm = id();
  const Tensor base = unwatermarked_latent(sample_id);
  d.watermarked_latent = algorithm_->watermarked_latent(sample_id, base);
  d.media = media;
  d.inverted_latent = channel_->invert(media, call_id);
  d.detection = detect_latent(d.inverted_latent, media);
  algorithm_->fill_visualization(d, sample_id, base);
  return d;
}

json WatermarkSystem::key_json() const { return algorithm_->key_json(); }

std::shared_ptr<const WatermarkSystem> load_system(AlgorithmId id, const AlgorithmConfig& config, const json* key) {
  require(config.algorithm == id, ErrorKind::kConfig,
          "config is for algorithm '" + std::string(algorithm_name(config.algorithm)) + "', requested '" +
              std::string(algorithm_name(id)) + "'");
  require_latent_shape(config.latent_shape);
  std::shared_ptr<WatermarkSystem> sys(new WatermarkSystem());
  sys->config_ = config;
  sys->channel_ = std::make_unique<Channel>(config.channel, config.latent_shape,
                                            derive_key(config.master_key, "channel/noise"));
  sys->algorithm_ = make_algorithm(config, *sys->channel_, key);

  const auto& policy = config.threshold;
  if (policy.kind == ThresholdPolicy::Kind::kFixed) {
    sys->threshold_ = policy.value;
  } else if (sys->algorithm_->reports_p_value()) {
    sys->threshold_ = sys->algorithm_->score_for_alpha(policy.value);
  } else {
    // Null scores from a calibration stream disjoint from evaluation samples.
    const std::size_t n = config.calibration_nulls;
    std::vector<double> scores(n);
    const SeededRng stream(derive_key(config.master_key, "calibration"), 0);
    const WatermarkSystem& s = *sys;
    parallel_for(n, 0, [&](std::size_t i) {
      const Media media = s.channel_->forward(gaussian_latent(stream.with_stream(i), config.latent_shape));
      scores[i] = s.algorithm_->detect(s.channel_->invert(media, kCalibrationCallBase + i), media).score;
    });
    sys->threshold_ = null_quantile_threshold(scores, sys->algorithm_->orientation(), policy.value);
    sys->calibration_ = std::move(scores);
  }
  return sys;
}

std::shared_ptr<const WatermarkSystem> load_system(AlgorithmId id) {
  return load_system(id, load_config_file(default_config_path(id)));
}

}  // namespace lmk
