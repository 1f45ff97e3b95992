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

// lmk: generate, detect, evaluate and visualize generative watermarks.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lmk/attacks.hpp"
#include "lmk/blob.hpp"
#include "lmk/error.hpp"
#include "lmk/evaluation.hpp"
#include "lmk/registry.hpp"
#include "lmk/viz.hpp"

namespace {

using nlohmann::json;
using namespace lmk;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

// Options shared by every subcommand that loads a system.
struct SystemOptions {
  std::string alg;
  std::string config;
  std::string channel;
  std::string key_in;
};

void add_system_options(CLI::App* cmd, SystemOptions& o) {
  cmd->add_option("--alg", o.alg, "Algorithm: TR, RI, ROBIN, WIND, GS, PRC, SEAL or VideoShield")->required();
  cmd->add_option("--config", o.config, "Config file (default: $LMK_CONFIG_DIR/<ALG>.json or config/<ALG>.json)");
  cmd->add_option("--channel", o.channel, "Channel override: identity | noise:<sigma> | toycodec[:<sigma_inv>] | bridge:<cmd>");
  cmd->add_option("--key-in", o.key_in, "Serialized key to use instead of the derived one");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIo, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kConfig, path + ": invalid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::kIo, "cannot write " + path);
  out << text;
  require(out.good(), ErrorKind::kIo, "write failed for " + path);
}

std::shared_ptr<const WatermarkSystem> open_system(const SystemOptions& o) {
  const AlgorithmId id = parse_algorithm_id(o.alg);
  AlgorithmConfig config = load_config_file(o.config.empty() ? default_config_path(id) : std::filesystem::path(o.config));
  if (!o.channel.empty()) config.channel = parse_channel_token(o.channel, config.channel);
  if (o.key_in.empty()) return load_system(id, config);
  const json key = read_json_file(o.key_in);
  return load_system(id, config, &key);
}

Media read_media(const WatermarkSystem& system, const std::string& path) {
  return {system.channel().media_kind(), read_blob(path)};
}

void print_error(ErrorKind kind, const std::string& message) {
  const json j = {{"error", {{"kind", error_kind_name(kind)}, {"message", message}}}};
  std::fprintf(stderr, "%s\n", j.dump().c_str());
}

// generate ---------------------------------------------------------------------

struct GenerateOptions {
  SystemOptions sys;
  std::uint64_t sample_id = 0;
  std::string out;
  std::string key_out;
  std::string png;
  bool unwatermarked = false;
};

int cmd_generate(const GenerateOptions& o) {
  const auto system = open_system(o.sys);
  const Media media = o.unwatermarked ? system->generate_unwatermarked_media(o.sample_id)
                                      : system->generate_watermarked_media(o.sample_id);
  write_blob(o.out, media.data);
  if (!o.key_out.empty()) write_text(o.key_out, system->key_json().dump(2) + "\n");
  if (!o.png.empty()) write_png(o.png, media_image(media));
  std::fprintf(stderr, "%s: sample %llu -> %s %s\n", o.sys.alg.c_str(), static_cast<unsigned long long>(o.sample_id),
               o.out.c_str(), to_string(media.data.shape()).c_str());
  return kExitOk;
}

// detect -----------------------------------------------------------------------

struct DetectOptions {
  SystemOptions sys;
  std::string media;
  std::uint64_t seed = 0;
  bool json_line = false;
  bool strict = false;
};

int cmd_detect(const DetectOptions& o) {
  const auto system = open_system(o.sys);
  const DetectionResult r = system->detect_watermark_in_media(read_media(*system, o.media), o.seed);
  const json j = to_json(r);
  std::printf("%s\n", (o.json_line ? j.dump() : j.dump(2)).c_str());
  return o.strict && !r.is_watermarked ? kExitNegative : kExitOk;
}

// evaluate ---------------------------------------------------------------------

struct EvaluateOptions {
  SystemOptions sys;
  std::string pipeline = "both";
  std::string attacks = "none";
  std::size_t n = 100;
  std::string samples;
  std::string report;
  std::string quality;
  std::optional<double> target_fpr;
  std::uint64_t seed = 0;
  int jobs = 0;
  bool timing = false;
  bool quiet = false;
};

int cmd_evaluate(const EvaluateOptions& o) {
  require(o.pipeline == "wmdetect" || o.pipeline == "uwmdetect" || o.pipeline == "both", ErrorKind::kUsage,
          "--pipeline must be wmdetect, uwmdetect or both, got '" + o.pipeline + "'");
  const auto start = std::chrono::steady_clock::now();
  PipelineOptions p;
  p.attacks = o.attacks == "none" ? AttackChain{} : parse_attack_chain(o.attacks);
  p.seed = o.seed;
  p.jobs = o.jobs;
  p.progress = !o.quiet;
  const auto system = open_system(o.sys);
  const SampleSet samples = o.samples.empty() ? SampleSet::range(o.n) : load_sample_set(o.samples, o.n);

  EvaluationReport report;
  report.algorithm = std::string(algorithm_name(system->id()));
  report.channel = describe(system->channel().spec());
  report.attacks = to_string(p.attacks);
  report.n = samples.size();
  report.seed = o.seed;
  const auto& policy = system->config().threshold;
  report.target_fpr = o.target_fpr.value_or(
      policy.kind == ThresholdPolicy::Kind::kTargetFpr ? policy.value : 0.01);

  ScoreSet scores;
  scores.orientation = system->orientation();
  if (o.pipeline != "uwmdetect") scores.watermarked = scores_of(run_wmdetect(*system, samples, p));
  if (o.pipeline != "wmdetect") scores.nulls = scores_of(run_uwmdetect(*system, samples, p));
  if (!scores.watermarked.empty()) report.watermarked_scores = mean_std(scores.watermarked);
  if (!scores.nulls.empty()) report.null_scores = mean_std(scores.nulls);
  if (!scores.watermarked.empty() && !scores.nulls.empty()) {
    report.fixed = fundamental_rates(scores, system->threshold());
    report.dynamic = dynamic_tpr_at_fpr(scores, report.target_fpr);
  }
  if (!o.quality.empty()) report.quality = quality_pipeline(*system, samples, parse_quality_mode(o.quality), o.jobs);
  if (o.timing) {
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  const std::string text = to_json(report).dump(2) + "\n";
  if (o.report.empty() || o.report == "-") {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text(o.report, text);
  }
  return kExitOk;
}

// visualize --------------------------------------------------------------------

struct VisualizeOptions {
  SystemOptions sys;
  std::string methods;
  std::size_t rows = 1;
  std::size_t cols = 0;
  std::string out;
  std::string media;
  std::uint64_t sample_id = 0;
  std::uint64_t seed = 0;
};

int cmd_visualize(const VisualizeOptions& o) {
  const auto system = open_system(o.sys);
  PanelGrid grid;
  if (o.methods.empty()) {
    for (const auto& m : default_panels(system->id())) grid.panels.push_back({m, std::nullopt, std::nullopt});
  } else {
    grid.panels = parse_panel_list(o.methods);
  }
  grid.rows = o.rows;
  grid.cols = o.cols != 0 ? o.cols : (grid.panels.size() + o.rows - 1) / std::max<std::size_t>(o.rows, 1);
  const Media media = o.media.empty() ? system->generate_watermarked_media(o.sample_id) : read_media(*system, o.media);
  render_panels(system->visualization_data(o.sample_id, media, o.seed), grid, o.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generative watermark toolkit: embed, detect, evaluate and visualize."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lmk 1.0.0");

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Generate watermarked media for one sample");
  add_system_options(g, gen.sys);
  g->add_option("--sample-id", gen.sample_id, "Sample index");
  g->add_option("--out", gen.out, "Media blob output path")->required();
  g->add_option("--key-out", gen.key_out, "Write the serialized key here");
  g->add_option("--png", gen.png, "Write a PNG preview of the media here");
  g->add_flag("--unwatermarked", gen.unwatermarked, "Generate from the unwatermarked latent instead");

  DetectOptions det;
  auto* d = app.add_subcommand("detect", "Detect a watermark in a media blob");
  add_system_options(d, det.sys);
  d->add_option("--media", det.media, "Media blob to inspect")->required();
  d->add_option("--seed", det.seed, "Seed for the inversion noise");
  d->add_flag("--json", det.json_line, "Print the result as a single JSON line");
  d->add_flag("--strict", det.strict, "Exit with status 1 when no watermark is detected");

  EvaluateOptions ev;
  auto* e = app.add_subcommand("evaluate", "Run detection pipelines and success-rate calculators");
  add_system_options(e, ev.sys);
  e->add_option("--pipeline", ev.pipeline, "wmdetect, uwmdetect or both");
  e->add_option("--attacks", ev.attacks, "Attack chain, e.g. jpeg:60 or rot:15,blur:5 (default none)");
  e->add_option("--n", ev.n, "Number of samples (cap when --samples is given)");
  e->add_option("--samples", ev.samples, "JSONL sample set");
  e->add_option("--report", ev.report, "Report path (default stdout)");
  e->add_option("--quality", ev.quality, "Quality mode: compared, direct or video");
  e->add_option("--target-fpr", ev.target_fpr, "Target FPR for the dynamic threshold");
  e->add_option("--seed", ev.seed, "Seed for attacks and inversion noise");
  e->add_option("--jobs", ev.jobs, "Worker threads (default: all available)");
  e->add_flag("--timing", ev.timing, "Record wall_time_s in the report");
  e->add_flag("--quiet", ev.quiet, "No progress lines on stderr");

  VisualizeOptions vis;
  auto* v = app.add_subcommand("visualize", "Render watermark mechanism panels to a PNG");
  add_system_options(v, vis.sys);
  v->add_option("--methods", vis.methods, "Comma-separated panel methods, options as name:channel=2:num_frames=4");
  v->add_option("--rows", vis.rows, "Grid rows");
  v->add_option("--cols", vis.cols, "Grid columns (default fits the panel list)");
  v->add_option("--out", vis.out, "Output PNG path")->required();
  v->add_option("--media", vis.media, "Media blob to visualize (default: generate the sample)");
  v->add_option("--sample-id", vis.sample_id, "Sample index");
  v->add_option("--seed", vis.seed, "Seed for the inversion noise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << "lmk 1.0.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& err) {
    print_error(ErrorKind::kUsage, err.what());
    return kExitError;
  }

  try {
    if (g->parsed()) return cmd_generate(gen);
    if (d->parsed()) return cmd_detect(det);
    if (e->parsed()) return cmd_evaluate(ev);
    return cmd_visualize(vis);
  } catch (const Error& err) {
    print_error(err.kind(), err.what());
  } catch (const std::exception& err) {
    print_error(ErrorKind::kIo, err.what());
  }
  return kExitError;
}
