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

#include "lmk/evaluation.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <set>

#include "json_fields.hpp"
#include "lmk/error.hpp"
#include "lmk/parallel.hpp"

namespace lmk {

using nlohmann::json;

SampleSet SampleSet::range(std::size_t n, std::uint64_t first) {
  SampleSet s;
  for (std::size_t i = 0; i < n; ++i) s.samples.push_back({first + i, std::nullopt, std::nullopt});
  return s;
}

SampleSet load_sample_set(const std::filesystem::path& path, std::size_t max_samples) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIo, "cannot open sample set " + path.string());
  SampleSet set;
  std::set<std::uint64_t> seen;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (max_samples != 0 && set.size() == max_samples) break;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::kConfig, where + ": invalid JSON: " + e.what());
    }
    detail::Fields f(j, where);
    SampleDescriptor d;
    d.sample_id = f.need<std::uint64_t>("sample_id");
    if (f.has("prompt")) d.prompt = f.need<std::string>("prompt");
    if (f.has("reference")) d.reference = f.need<std::string>("reference");
    f.finish();
    require(seen.insert(d.sample_id).second, ErrorKind::kConfig,
            where + ": duplicate sample_id " + std::to_string(d.sample_id));
    set.samples.push_back(std::move(d));
  }
  return set;
}

// Calculators ------------------------------------------------------------------

json to_json(const SuccessRateReport& r) {
  return {{"threshold", r.threshold}, {"tp", r.tp},         {"fp", r.fp},         {"tn", r.tn},
          {"fn", r.fn},               {"tpr", r.tpr},       {"fpr", r.fpr},       {"tnr", r.tnr},
          {"fnr", r.fnr},             {"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1},
          {"accuracy", r.accuracy}};
}

namespace {

double ratio(std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

}  // namespace

SuccessRateReport fundamental_rates(const ScoreSet& s, double tau) {
  require(!s.watermarked.empty() && !s.nulls.empty(), ErrorKind::kDomain,
          "success rates need both watermarked and null scores");
  SuccessRateReport r;
  r.threshold = tau;
  for (const double v : s.watermarked) (score_is_watermarked(v, tau, s.orientation) ? r.tp : r.fn)++;
  for (const double v : s.nulls) (score_is_watermarked(v, tau, s.orientation) ? r.fp : r.tn)++;
  r.tpr = ratio(r.tp, r.tp + r.fn);
  r.fnr = ratio(r.fn, r.tp + r.fn);
  r.fpr = ratio(r.fp, r.fp + r.tn);
  r.tnr = ratio(r.tn, r.fp + r.tn);
  r.precision = ratio(r.tp, r.tp + r.fp);
  r.recall = r.tpr;
  const double pr = r.precision + r.recall;
  r.f1 = pr == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / pr;
  r.accuracy = ratio(r.tp + r.tn, r.tp + r.tn + r.fp + r.fn);
  return r;
}

SuccessRateReport dynamic_tpr_at_fpr(const ScoreSet& s, double target_fpr) {
  require(target_fpr >= 0.0 && target_fpr < 1.0, ErrorKind::kDomain, "target FPR must be in [0, 1)");
  require(!s.nulls.empty(), ErrorKind::kDomain, "dynamic threshold needs null scores");
  return fundamental_rates(s, null_quantile_threshold(s.nulls, s.orientation, target_fpr));
}

// Pipelines --------------------------------------------------------------------

namespace {

// Invert-noise address and attack seed for one side of one sample.
std::uint64_t call_id(const PipelineOptions& o, std::uint64_t sample_id, int side) {
  return (o.seed << 40) ^ (2 * sample_id + static_cast<std::uint64_t>(side));
}

std::vector<DetectionResult> run_pipeline(const WatermarkSystem& system, const SampleSet& samples,
                                          const PipelineOptions& o, int side) {
  const char* name = side == 0 ? "wmdetect" : "uwmdetect";
  for (const auto& a : o.attacks) validate(a);
  std::vector<DetectionResult> out(samples.size());
  std::atomic<std::size_t> done{0};
  parallel_for(samples.size(), o.jobs, [&](std::size_t i) {
    const std::uint64_t id = samples.samples[i].sample_id;
    try {
      const Media media =
          side == 0 ? system.generate_watermarked_media(id) : system.generate_unwatermarked_media(id);
      const std::uint64_t call = call_id(o, id, side);
      const Media attacked = o.attacks.empty() ? media : apply_chain(o.attacks, media, call);
      out[i] = system.detect_watermark_in_media(attacked, call);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(name) + " sample " + std::to_string(id) + ": " + e.what());
    }
    const std::size_t n = ++done;
    if (o.progress && (n == samples.size() || n % 10 == 0)) {
#pragma omp critical(lmk_progress)
      std::fprintf(stderr, "%s %s: %zu/%zu\n", std::string(algorithm_name(system.id())).c_str(), name, n,
                   samples.size());
    }
  });
  return out;
}

}  // namespace

std::vector<DetectionResult> run_wmdetect(const WatermarkSystem& system, const SampleSet& samples,
                                          const PipelineOptions& options) {
  return run_pipeline(system, samples, options, 0);
}

std::vector<DetectionResult> run_uwmdetect(const WatermarkSystem& system, const SampleSet& samples,
                                           const PipelineOptions& options) {
  return run_pipeline(system, samples, options, 1);
}

std::vector<double> scores_of(const std::vector<DetectionResult>& results) {
  std::vector<double> s;
  s.reserve(results.size());
  for (const auto& r : results) s.push_back(r.score);
  return s;
}

// Quality ----------------------------------------------------------------------

namespace {

constexpr std::pair<QualityMode, std::string_view> kModes[] = {
    {QualityMode::kCompared, "compared"}, {QualityMode::kDirect, "direct"}, {QualityMode::kVideo, "video"},
    {QualityMode::kGroup, "group"},       {QualityMode::kRepeat, "repeat"}, {QualityMode::kRef, "ref"},
};

}  // namespace

QualityMode parse_quality_mode(std::string_view name) {
  for (const auto& [mode, n] : kModes) {
    if (n == name) return mode;
  }
  fail(ErrorKind::kUsage, "unknown quality mode '" + std::string(name) +
                              "' (expected compared, direct, video, group, repeat or ref)");
}

std::string_view quality_mode_name(QualityMode mode) {
  for (const auto& [m, n] : kModes) {
    if (m == mode) return n;
  }
  return "?";
}

QualityReport quality_pipeline(const WatermarkSystem& system, const SampleSet& samples, QualityMode mode, int jobs) {
  switch (mode) {
    case QualityMode::kGroup:
      fail(ErrorKind::kUnsupported, "quality mode 'group' needs distribution metrics (FID, IS), which are not available");
    case QualityMode::kRepeat:
      fail(ErrorKind::kUnsupported,
           "quality mode 'repeat' needs learned diversity metrics (LPIPS), which are not available");
    case QualityMode::kRef:
      fail(ErrorKind::kUnsupported,
           "quality mode 'ref' needs learned reference metrics (CLIP score), which are not available");
    default: break;
  }
  require(samples.size() > 0, ErrorKind::kDomain, "quality pipeline needs at least one sample");
  std::vector<std::vector<std::pair<std::string, double>>> rows(samples.size());
  parallel_for(samples.size(), jobs, [&](std::size_t i) {
    const std::uint64_t id = samples.samples[i].sample_id;
    const Tensor wm = display_pixels(system.generate_watermarked_media(id));
    auto& row = rows[i];
    if (mode == QualityMode::kCompared) {
      const Tensor ref = display_pixels(system.generate_reference_media(id));
      row = {{"PSNR", psnr(wm, ref)}, {"SSIM", ssim(wm, ref)}, {"MSE", mse(wm, ref)}};
      return;
    }
    require(wm.shape().frames >= 2, ErrorKind::kUnsupported,
            "quality mode '" + std::string(quality_mode_name(mode)) +
                "' has only video proxies; no-reference image metrics (NIQE, BRISQUE) need learned models");
    const VideoProxies p = video_quality_proxies(wm);
    row = {{"frame_smoothness", p.frame_smoothness}, {"dynamic_degree_proxy", p.dynamic_degree_proxy}};
    if (mode == QualityMode::kVideo) {
      const VideoProxies u = video_quality_proxies(display_pixels(system.generate_reference_media(id)));
      row.emplace_back("frame_smoothness_unwatermarked", u.frame_smoothness);
      row.emplace_back("dynamic_degree_proxy_unwatermarked", u.dynamic_degree_proxy);
    }
  });
  std::map<std::string, std::vector<double>> values;
  for (const auto& row : rows) {
    for (const auto& [name, v] : row) values[name].push_back(v);
  }
  QualityReport report;
  for (const auto& [name, v] : values) report[name] = mean_std(v);
  return report;
}

json to_json(const QualityReport& report) {
  json j = json::object();
  for (const auto& [name, ms] : report) j[name] = {{"mean", ms.mean}, {"std", ms.std}};
  return j;
}

json to_json(const EvaluationReport& r) {
  json rates = json::object();
  if (r.fixed) rates["fixed_threshold"] = to_json(*r.fixed);
  if (r.dynamic) {
    rates["target_fpr"] = r.target_fpr;
    rates["tpr_at_fpr"] = to_json(*r.dynamic);
  }
  json scores = json::object();
  if (r.watermarked_scores) scores["watermarked"] = {{"mean", r.watermarked_scores->mean}, {"std", r.watermarked_scores->std}};
  if (r.null_scores) scores["null"] = {{"mean", r.null_scores->mean}, {"std", r.null_scores->std}};
  json j = {{"algorithm", r.algorithm},
            {"channel", r.channel},
            {"attacks", r.attacks},
            {"n", r.n},
            {"rates", rates},
            {"scores", scores},
            {"quality", r.quality ? to_json(*r.quality) : json::object()},
            {"seed", r.seed},
            {"wall_time_s", r.wall_time_s ? json(*r.wall_time_s) : json(nullptr)}};
  return j;
}

}  // namespace lmk
