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

#include <cmath>
#include <optional>
#include <string>

#include "algorithm.hpp"
#include "json_fields.hpp"
#include "lmk/error.hpp"
#include "lmk/keybased.hpp"
#include "lmk/pattern.hpp"
#include "lmk/stats.hpp"

namespace lmk {

using nlohmann::json;

double Algorithm::score_for_alpha(double) const {
  fail(ErrorKind::kUnsupported, "this algorithm has no p-value threshold");
}

namespace {

Key256 algorithm_root(const AlgorithmConfig& c) {
  return derive_key(c.master_key, "alg/" + std::string(algorithm_name(c.algorithm)));
}

// Ring values travel as [re, im] pairs; the stored patterns are real.
json ring_pairs(const std::vector<double>& values) {
  json out = json::array();
  for (const double v : values) out.push_back({v, 0.0});
  return out;
}

std::vector<double> ring_values_from(const json& j, const std::string& context) {
  require(j.is_array(), ErrorKind::kConfig, context + ": expected a list of [re, im] pairs");
  std::vector<double> out;
  for (const auto& p : j) {
    require(p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number(), ErrorKind::kConfig,
            context + ": expected [re, im] pairs");
    require(std::abs(p[1].get<double>()) <= 1e-12, ErrorKind::kConfig,
            context + ": ring values must be real so the patterned latent stays real");
    out.push_back(p[0].get<double>());
  }
  return out;
}

// Common header of every serialized key.
detail::Fields open_key(const json& key, const AlgorithmConfig& c) {
  detail::Fields f(key, "key");
  const auto alg = f.need<std::string>("algorithm");
  require(alg == algorithm_name(c.algorithm), ErrorKind::kConfig,
          "key is for algorithm '" + alg + "', config is for '" + std::string(algorithm_name(c.algorithm)) + "'");
  const Shape s = detail::shape_from_json(f.raw("latent_shape"), "key.latent_shape");
  require(s == c.latent_shape, ErrorKind::kConfig,
          "key latent shape " + to_string(s) + " does not match config " + to_string(c.latent_shape));
  return f;
}

json key_header(const AlgorithmConfig& c) {
  return {{"algorithm", algorithm_name(c.algorithm)}, {"latent_shape", detail::shape_to_json(c.latent_shape)}};
}

SpectralPlane ring_spectrum(const FourierMask& mask, const std::vector<double>& values) {
  SpectralPlane p{mask.height, mask.width, std::vector<Complex>(mask.height * mask.width)};
  for (const auto idx : mask.members()) {
    const int r = rounded_radius(idx / mask.width, idx % mask.width, mask.height, mask.width);
    p.data[idx] = Complex(values[static_cast<std::size_t>(r - 1)], 0.0);
  }
  return p;
}

Shape near_square_bits(std::size_t k) {
  std::size_t rows = static_cast<std::size_t>(std::sqrt(static_cast<double>(k)));
  while (rows > 1 && k % rows != 0) --rows;
  return {1, 1, rows, k / rows};
}

void fill_bit_detection(DetectionResult& r, const BitDetection& b, bool message) {
  r.score = b.score;
  r.p_value = b.p_value;
  if (message) {
    r.bit_accuracy = b.score;
    r.bits = b.bits;
  }
  r.frame_accuracies = b.frame_accuracies;
  r.tampered_frames = b.tampered_frames;
}

// Tree-Ring ------------------------------------------------------------------

class TreeRing : public Algorithm {
 public:
  // `root` overrides the key-derivation root (ROBIN keeps its own).
  TreeRing(const AlgorithmConfig& c, const Channel& ch, const json* key, std::optional<Key256> root = std::nullopt)
      : Algorithm(ch), config_(c) {
    if (key) {
      auto f = open_key(*key, c);
      const int radius = f.need<int>("radius");
      const auto channel = f.need<std::size_t>("channel");
      key_ = tr_key_from_values(c.latent_shape, radius, channel, ring_values_from(f.raw("ring_values"), "key.ring_values"));
      f.finish();
    } else {
      detail::Fields f(c.params, "params");
      const int radius = f.get<int>("radius", 10);
      const auto channel = f.get<std::size_t>("channel", 3);
      f.finish();
      key_ = tr_generate_key(SeededRng(derive_key(root.value_or(algorithm_root(c)), "tr/pattern"), 0), c.latent_shape, radius,
                             channel);
    }
  }

  Orientation orientation() const override { return Orientation::kLowerIsWatermarked; }

  Tensor watermarked_latent(std::uint64_t, const Tensor& base) const override { return tr_embed(key_, base); }

  DetectionResult detect(const Tensor& inverted, const Media&) const override {
    DetectionResult r;
    r.score = tr_distance(key_, inverted);
    return r;
  }

  json key_json() const override {
    json j = key_header(config_);
    j["radius"] = key_.radius;
    j["channel"] = key_.channel;
    j["ring_values"] = ring_pairs(key_.ring_values);
    return j;
  }

  void fill_visualization(VisualizationData& d, std::uint64_t, const Tensor&) const override {
    d.pattern_fft = ring_spectrum(key_.mask, key_.ring_values);
    d.pattern_mask = key_.mask;
    d.pattern_channel = key_.channel;
  }

 protected:
  AlgorithmConfig config_;
  RingKey key_;
};

// ROBIN: the Tree-Ring pattern blended into a mid-trajectory state.

class Robin : public TreeRing {
 public:
  Robin(const AlgorithmConfig& c, const Channel& ch, const json* key) : TreeRing(strip(c), ch, ring_of(key), algorithm_root(c)) {
    config_ = c;
    require(ch.supports_trajectory(), ErrorKind::kCapability,
            "ROBIN needs a channel with a generation trajectory; " + describe(ch.spec()) + " has none");
    if (key) {
      auto f = open_key(*key, c);
      f.raw("ring");
      strength_ = f.need<double>("strength");
      step_ = f.need<std::size_t>("step");
      f.finish();
    } else {
      detail::Fields f(c.params, "params");
      f.get<int>("radius", 0);
      f.get<std::size_t>("channel", 0);
      strength_ = f.get<double>("strength", 1.0);
      step_ = f.get<std::size_t>("step", ch.spec().steps / 2);
      f.finish();
    }
    require(strength_ >= 0.0 && strength_ <= 1.0, ErrorKind::kConfig, "ROBIN strength must be in [0, 1]");
    require(step_ < ch.spec().steps, ErrorKind::kConfig,
            "ROBIN step " + std::to_string(step_) + " outside the " + std::to_string(ch.spec().steps) + "-step trajectory");
  }

  Tensor watermarked_latent(std::uint64_t, const Tensor& base) const override {
    const Tensor state = channel().trajectory_state(base, step_);
    const Tensor marked = pattern_blend(key_, state, strength_);
    Tensor out = base;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += marked[i] - state[i];
    return out;
  }

  Media generate(std::uint64_t, const Tensor& base) const override {
    return channel().inject_at(base, step_, [this](const Tensor& z) { return pattern_blend(key_, z, strength_); });
  }

  DetectionResult detect(const Tensor& inverted, const Media&) const override {
    DetectionResult r;
    r.score = tr_distance(key_, channel().trajectory_state(inverted, step_));
    return r;
  }

  json key_json() const override {
    json ring = TreeRing::key_json();
    ring["algorithm"] = "TR";
    json j = key_header(config_);
    j["ring"] = ring;
    j["strength"] = strength_;
    j["step"] = step_;
    return j;
  }

 private:
  static const json* ring_of(const json* key) {
    if (!key) return nullptr;
    require(key->is_object() && key->contains("ring"), ErrorKind::kConfig, "key.ring: missing required field");
    return &key->at("ring");
  }

  // The embedded Tree-Ring reads only the ring fields.
  static AlgorithmConfig strip(AlgorithmConfig c) {
    c.algorithm = AlgorithmId::kTR;
    json p = json::object();
    for (const char* name : {"radius", "channel"}) {
      if (c.params.contains(name)) p[name] = c.params.at(name);
    }
    c.params = p;
    return c;
  }

  double strength_ = 1.0;
  std::size_t step_ = 0;
};

// Ring-ID ----------------------------------------------------------------------

class RingId : public Algorithm {
 public:
  RingId(const AlgorithmConfig& c, const Channel& ch, const json* key) : Algorithm(ch), config_(c) {
    if (key) {
      auto f = open_key(*key, c);
      const int radius = f.need<int>("radius");
      const auto channels = f.need<std::vector<std::size_t>>("channels");
      const double amplitude = f.need<double>("amplitude");
      const auto& keys = f.raw("keys");
      require(keys.is_array(), ErrorKind::kConfig, "key.keys: expected a list");
      std::vector<std::vector<std::vector<double>>> values;
      for (std::size_t k = 0; k < keys.size(); ++k) {
        require(keys[k].is_array(), ErrorKind::kConfig, "key.keys: expected per-channel ring lists");
        auto& slots = values.emplace_back();
        for (const auto& slot : keys[k]) slots.push_back(ring_values_from(slot, "key.keys[" + std::to_string(k) + "]"));
      }
      f.finish();
      set_ = ri_keyset_from_values(c.latent_shape, radius, channels, amplitude, std::move(values));
    } else {
      detail::Fields f(c.params, "params");
      const int radius = f.get<int>("radius", 10);
      const auto channels = f.get<std::vector<std::size_t>>("channels", {0, 3});
      const auto count = f.get<std::size_t>("num_keys", 16);
      const double amplitude = f.get<double>("amplitude", 2.0);
      f.finish();
      set_ = ri_generate_keyset(SeededRng(derive_key(algorithm_root(c), "ri/keys"), 0), c.latent_shape, radius,
                                channels, count, amplitude);
    }
  }

  Orientation orientation() const override { return Orientation::kLowerIsWatermarked; }

  std::size_t key_for(std::uint64_t sample_id) const { return sample_id % set_.size(); }

  Tensor watermarked_latent(std::uint64_t sample_id, const Tensor& base) const override {
    return ri_embed(set_, key_for(sample_id), base);
  }

  DetectionResult detect(const Tensor& inverted, const Media&) const override {
    const Identification id = ri_identify(set_, inverted);
    DetectionResult r;
    r.score = id.score;
    r.matched_key_id = id.key_id;
    return r;
  }

  json key_json() const override {
    json j = key_header(config_);
    j["radius"] = set_.radius;
    j["channels"] = set_.channels;
    j["amplitude"] = set_.amplitude;
    json keys = json::array();
    for (const auto& k : set_.values) {
      json slots = json::array();
      for (const auto& slot : k) slots.push_back(ring_pairs(slot));
      keys.push_back(slots);
    }
    j["keys"] = keys;
    return j;
  }

  void fill_visualization(VisualizationData& d, std::uint64_t sample_id, const Tensor&) const override {
    const auto& k = set_.values[key_for(sample_id)];
    d.pattern_fft = ring_spectrum(set_.mask, k[0]);
    d.pattern_channel = set_.channels[0];
    d.pattern_mask = set_.mask;
    const std::size_t second = k.size() > 1 ? 1 : 0;
    d.secondary_pattern_fft = ring_spectrum(set_.mask, k[second]);
    d.secondary_channel = set_.channels[second];
  }

 private:
  AlgorithmConfig config_;
  RingKeySet set_;
};

// WIND -------------------------------------------------------------------------

class Wind : public Algorithm {
 public:
  Wind(const AlgorithmConfig& c, const Channel& ch, const json* key) : Algorithm(ch), config_(c) {
    if (key) {
      auto f = open_key(*key, c);
      const auto seeds = f.need<std::size_t>("num_seeds");
      const int radius = f.need<int>("radius");
      const auto channel = f.need<std::size_t>("channel");
      const double amplitude = f.need<double>("amplitude");
      const Key256 noise = key_from_hex(f.need<std::string>("noise_key"));
      const auto& pats = f.raw("group_patterns");
      require(pats.is_array(), ErrorKind::kConfig, "key.group_patterns: expected a list");
      std::vector<std::vector<double>> groups;
      for (const auto& p : pats) groups.push_back(ring_values_from(p, "key.group_patterns"));
      f.finish();
      key_ = wind_key_from_values(noise, c.latent_shape, seeds, radius, channel, amplitude, std::move(groups));
    } else {
      detail::Fields f(c.params, "params");
      const auto seeds = f.get<std::size_t>("num_seeds", 64);
      const auto groups = f.get<std::size_t>("groups", 8);
      const int radius = f.get<int>("radius", 10);
      const auto channel = f.get<std::size_t>("channel", 3);
      const double amplitude = f.get<double>("amplitude", 2.0);
      f.finish();
      const Key256 root = algorithm_root(c);
      key_ = wind_generate_key(SeededRng(derive_key(root, "wind/groups"), 0), derive_key(root, "wind/noise"),
                               c.latent_shape, seeds, groups, radius, channel, amplitude);
    }
  }

  Orientation orientation() const override { return Orientation::kHigherIsWatermarked; }

  std::size_t seed_for(std::uint64_t sample_id) const { return sample_id % key_.num_seeds; }

  Tensor watermarked_latent(std::uint64_t sample_id, const Tensor&) const override {
    return wind_embed(key_, seed_for(sample_id));
  }

  Tensor reference_latent(std::uint64_t sample_id, const Tensor&) const override {
    return wind_base_noise(key_, seed_for(sample_id));
  }

  DetectionResult detect(const Tensor& inverted, const Media&) const override {
    const WindMatch m = wind_detect(key_, inverted);
    DetectionResult r;
    r.score = m.score;
    r.matched_key_id = m.seed;
    r.matched_group = m.group;
    return r;
  }

  json key_json() const override {
    json j = key_header(config_);
    j["num_seeds"] = key_.num_seeds;
    j["radius"] = key_.radius;
    j["channel"] = key_.channel;
    j["amplitude"] = key_.amplitude;
    j["noise_key"] = key_to_hex(key_.noise_key);
    json pats = json::array();
    for (const auto& g : key_.group_values) pats.push_back(ring_pairs(g));
    j["group_patterns"] = pats;
    return j;
  }

  void fill_visualization(VisualizationData& d, std::uint64_t sample_id, const Tensor&) const override {
    d.pattern_fft = ring_spectrum(key_.mask, key_.group_values[key_.group_of(seed_for(sample_id))]);
    d.pattern_mask = key_.mask;
    d.pattern_channel = key_.channel;
  }

 private:
  AlgorithmConfig config_;
  WindKey key_;
};

// Gaussian Shading -------------------------------------------------------------

class GaussianShading : public Algorithm {
 public:
  GaussianShading(const AlgorithmConfig& c, const Channel& ch, const json* key) : Algorithm(ch), config_(c) {
    if (key) {
      auto f = open_key(*key, c);
      key_.shape = c.latent_shape;
      key_.replication = f.need<std::array<std::size_t, 3>>("replication");
      const auto bits = f.need<std::size_t>("message_bits");
      key_.message = bits_from_hex(f.need<std::string>("message"), bits);
      key_.cipher_key = key_from_hex(f.need<std::string>("cipher_key"));
      key_.sample_key = key_from_hex(f.need<std::string>("sample_key"));
      f.finish();
      gs_validate(key_);
    } else {
      detail::Fields f(c.params, "params");
      const auto rep = f.get<std::array<std::size_t, 3>>("replication", {1, 8, 8});
      f.finish();
      key_ = gs_generate_key(algorithm_root(c), c.latent_shape, rep);
    }
  }

  Orientation orientation() const override { return Orientation::kHigherIsWatermarked; }
  bool reports_p_value() const override { return true; }

  Tensor watermarked_latent(std::uint64_t sample_id, const Tensor&) const override {
    return gs_embed(key_, sample_id);
  }

  DetectionResult detect(const Tensor& inverted, const Media&) const override {
    DetectionResult r;
    fill_bit_detection(r, gs_detect(key_, inverted), true);
    return r;
  }

  double score_for_alpha(double alpha) const override {
    const auto k = key_.message.size();
    return static_cast<double>(min_successes_for_alpha(k, alpha)) / static_cast<double>(k);
  }

  json key_json() const override {
    json j = key_header(config_);
    j["replication"] = key_.replication;
    j["message_bits"] = key_.message.size();
    j["message"] = bits_to_hex(key_.message);
    j["cipher_key"] = key_to_hex(key_.cipher_key);
    j["sample_key"] = key_to_hex(key_.sample_key);
    return j;
  }

  void fill_visualization(VisualizationData& d, std::uint64_t, const Tensor&) const override {
    d.watermark_bits = key_.message;
    d.reconstructed_bits = d.detection.bits;
    d.bits_shape = key_.message_shape();
  }

 private:
  AlgorithmConfig config_;
  GsKey key_;
};

// PRC --------------------------------------------------------------------------

Tensor signs_of(const Tensor& t) {
  Tensor out(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i] >= 0.0 ? 1.0 : -1.0;
  return out;
}

class Prc : public Algorithm {
 public:
  Prc(const AlgorithmConfig& c, const Channel& ch, const json* key) : Algorithm(ch), config_(c) {
    if (key) {
      auto f = open_key(*key, c);
      key_.shape = c.latent_shape;
      key_.check_size = f.need<std::size_t>("check_size");
      key_.checks = f.need<std::vector<std::vector<std::size_t>>>("checks");
      key_.sign_key = key_from_hex(f.need<std::string>("sign_key"));
      f.finish();
      prc_validate(key_);
    } else {
      detail::Fields f(c.params, "params");
      const auto checks = f.get<std::size_t>("checks", 512);
      const auto size = f.get<std::size_t>("check_size", 3);
      f.finish();
      const Key256 root = algorithm_root(c);
      key_ = prc_generate_key(SeededRng(derive_key(root, "prc/checks"), 0), derive_key(root, "prc/signs"),
                              c.latent_shape, checks, size);
    }
  }

  Orientation orientation() const override { return Orientation::kHigherIsWatermarked; }
  bool reports_p_value() const override { return true; }

  Tensor watermarked_latent(std::uint64_t sample_id, const Tensor&) const override {
    return prc_embed(key_, sample_id);
  }

  DetectionResult detect(const Tensor& inverted, const Media&) const override {
    DetectionResult r;
    fill_bit_detection(r, prc_detect(key_, inverted), false);
    return r;
  }

  double score_for_alpha(double alpha) const override {
    const auto r = key_.checks.size();
    return static_cast<double>(min_successes_for_alpha(r, alpha)) / static_cast<double>(r);
  }

  json key_json() const override {
    json j = key_header(config_);
    j["check_size"] = key_.check_size;
    j["checks"] = key_.checks;
    j["sign_key"] = key_to_hex(key_.sign_key);
    return j;
  }

  void fill_visualization(VisualizationData& d, std::uint64_t, const Tensor&) const override {
    d.codeword = signs_of(d.watermarked_latent);
    d.recovered_codeword = signs_of(d.inverted_latent);
  }

 private:
  AlgorithmConfig config_;
  PrcKey key_;
};

// SEAL -------------------------------------------------------------------------

PoolOperator seal_pool(const Channel& ch, std::size_t pool) {
  auto op = ch.pool_operator(pool);
  require(op.has_value(), ErrorKind::kCapability,
          "SEAL's avgpool provider needs a simulated channel; " + describe(ch.spec()) + " has no pooled-media operator");
  return *op;
}

class Seal : public Algorithm {
 public:
  Seal(const AlgorithmConfig& c, const Channel& ch, const json* key) : Algorithm(ch), config_(c) {
    SealKey k;
    bool estimate = false;
    std::size_t null_samples = 0;
    if (key) {
      auto f = open_key(*key, c);
      k.salt = key_from_hex(f.need<std::string>("salt"));
      k.bits = f.need<std::size_t>("bits");
      const auto grid = f.need<std::array<std::size_t, 2>>("patch_grid");
      k.grid_h = grid[0];
      k.grid_w = grid[1];
      k.pool = f.need<std::size_t>("pool");
      k.patch_threshold = f.need<double>("patch_threshold");
      k.null_rate = f.need<double>("null_rate");
      k.provider = f.need<std::string>("provider");
      f.finish();
    } else {
      detail::Fields f(c.params, "params");
      k.bits = f.get<std::size_t>("bits", k.bits);
      const auto grid = f.get<std::array<std::size_t, 2>>("patch_grid", {k.grid_h, k.grid_w});
      k.grid_h = grid[0];
      k.grid_w = grid[1];
      k.pool = f.get<std::size_t>("pool", k.pool);
      k.patch_threshold = f.get<double>("patch_threshold", k.patch_threshold);
      k.provider = f.get<std::string>("provider", k.provider);
      null_samples = f.get<std::size_t>("null_samples", 200);
      f.finish();
      k.salt = derive_key(algorithm_root(c), "seal/salt");
      estimate = true;
    }
    scheme_ = std::make_unique<SealScheme>(k, c.latent_shape, seal_pool(ch, k.pool));
    if (estimate) {
      scheme_->set_null_rate(
          scheme_->estimate_null_rate(null_samples, SeededRng(derive_key(algorithm_root(c), "seal/nulls"), 0)));
    }
  }

  Orientation orientation() const override { return Orientation::kHigherIsWatermarked; }
  bool reports_p_value() const override { return true; }

  Tensor watermarked_latent(std::uint64_t, const Tensor& base) const override {
    return scheme_->embed(base, scheme_->hash(channel().forward(base)));
  }

  DetectionResult detect(const Tensor& inverted, const Media& media) const override {
    DetectionResult r;
    fill_bit_detection(r, scheme_->detect(inverted, scheme_->hash(media)), false);
    return r;
  }

  double score_for_alpha(double alpha) const override {
    const auto p = scheme_->patches();
    return static_cast<double>(min_successes_for_alpha(p, alpha, scheme_->key().null_rate)) / static_cast<double>(p);
  }

  json key_json() const override {
    const SealKey& k = scheme_->key();
    json j = key_header(config_);
    j["salt"] = key_to_hex(k.salt);
    j["bits"] = k.bits;
    j["patch_grid"] = {k.grid_h, k.grid_w};
    j["pool"] = k.pool;
    j["patch_threshold"] = k.patch_threshold;
    j["null_rate"] = k.null_rate;
    j["provider"] = k.provider;
    return j;
  }

  void fill_visualization(VisualizationData& d, std::uint64_t, const Tensor& base) const override {
    d.reference_embedding = scheme_->embedding(channel().forward(base));
    d.media_embedding = scheme_->embedding(d.media);
    d.patch_scores = scheme_->patch_scores(d.inverted_latent, scheme_->hash(d.media));
    d.patch_grid_h = scheme_->key().grid_h;
    d.patch_grid_w = scheme_->key().grid_w;
  }

 private:
  AlgorithmConfig config_;
  std::unique_ptr<SealScheme> scheme_;
};

// VideoShield ------------------------------------------------------------------

std::size_t index_bits_for(std::size_t frames) {
  std::size_t bits = 1;
  while ((std::size_t{1} << bits) < frames) ++bits;
  return bits;
}

class VideoShield : public Algorithm {
 public:
  VideoShield(const AlgorithmConfig& c, const Channel& ch, const json* key) : Algorithm(ch), config_(c) {
    if (key) {
      auto f = open_key(*key, c);
      key_.shape = c.latent_shape;
      const auto bits = f.need<std::size_t>("message_bits");
      key_.message = bits_from_hex(f.need<std::string>("message"), bits);
      key_.index_bits = f.need<std::size_t>("index_bits");
      key_.temporal = f.need<std::size_t>("temporal");
      key_.frame_threshold = f.need<double>("frame_threshold");
      key_.cipher_key = key_from_hex(f.need<std::string>("cipher_key"));
      key_.index_key = key_from_hex(f.need<std::string>("index_key"));
      key_.sample_key = key_from_hex(f.need<std::string>("sample_key"));
      f.finish();
      vs_validate(key_);
    } else {
      detail::Fields f(c.params, "params");
      const auto bits = f.get<std::size_t>("message_bits", 256);
      const auto index = f.get<std::size_t>("index_bits", index_bits_for(c.latent_shape.frames));
      const auto temporal = f.get<std::size_t>("temporal", 1);
      const double threshold = f.get<double>("frame_threshold", 0.8);
      f.finish();
      key_ = vs_generate_key(algorithm_root(c), c.latent_shape, bits, index, temporal, threshold);
    }
  }

  Orientation orientation() const override { return Orientation::kHigherIsWatermarked; }
  bool reports_p_value() const override { return true; }

  Tensor watermarked_latent(std::uint64_t sample_id, const Tensor&) const override {
    return vs_embed(key_, sample_id);
  }

  DetectionResult detect(const Tensor& inverted, const Media&) const override {
    DetectionResult r;
    fill_bit_detection(r, vs_detect(key_, inverted), true);
    return r;
  }

  double score_for_alpha(double alpha) const override {
    const auto k = key_.message.size();
    return static_cast<double>(min_successes_for_alpha(k, alpha)) / static_cast<double>(k);
  }

  json key_json() const override {
    json j = key_header(config_);
    j["message_bits"] = key_.message.size();
    j["message"] = bits_to_hex(key_.message);
    j["index_bits"] = key_.index_bits;
    j["temporal"] = key_.temporal;
    j["frame_threshold"] = key_.frame_threshold;
    j["cipher_key"] = key_to_hex(key_.cipher_key);
    j["index_key"] = key_to_hex(key_.index_key);
    j["sample_key"] = key_to_hex(key_.sample_key);
    return j;
  }

  void fill_visualization(VisualizationData& d, std::uint64_t, const Tensor&) const override {
    d.watermark_bits = key_.message;
    d.reconstructed_bits = d.detection.bits;
    d.bits_shape = near_square_bits(key_.message.size());
  }

 private:
  AlgorithmConfig config_;
  VsKey key_;
};

}  // namespace

std::unique_ptr<Algorithm> make_algorithm(const AlgorithmConfig& c, const Channel& ch, const json* key) {
  switch (c.algorithm) {
    case AlgorithmId::kTR: return std::make_unique<TreeRing>(c, ch, key);
    case AlgorithmId::kRI: return std::make_unique<RingId>(c, ch, key);
    case AlgorithmId::kROBIN: return std::make_unique<Robin>(c, ch, key);
    case AlgorithmId::kWIND: return std::make_unique<Wind>(c, ch, key);
    case AlgorithmId::kGS: return std::make_unique<GaussianShading>(c, ch, key);
    case AlgorithmId::kPRC: return std::make_unique<Prc>(c, ch, key);
    case AlgorithmId::kSEAL: return std::make_unique<Seal>(c, ch, key);
    case AlgorithmId::kVideoShield: return std::make_unique<VideoShield>(c, ch, key);
  }
  fail(ErrorKind::kUnknownAlgorithm, "unknown algorithm");
}

}  // namespace lmk
