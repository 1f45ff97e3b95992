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

#include <algorithm>
#include <cmath>

#include "lmk/error.hpp"
#include "lmk/keybased.hpp"
#include "lmk/stats.hpp"

namespace lmk {

void prc_validate(const PrcKey& key) {
  const std::size_t n = key.length();
  require(n > 0, ErrorKind::kConfig, "PRC codeword length must be positive");
  require(key.check_size >= 2, ErrorKind::kConfig, "PRC checks need at least 2 positions");
  require(!key.checks.empty() && key.checks.size() <= n / 2, ErrorKind::kConfig,
          "PRC needs 1 <= checks <= n/2, got " + std::to_string(key.checks.size()) + " for n = " + std::to_string(n));
  std::size_t prev_pivot = 0;
  for (std::size_t i = 0; i < key.checks.size(); ++i) {
    const auto& c = key.checks[i];
    require(c.size() >= 2 && c.size() <= key.check_size, ErrorKind::kConfig,
            "PRC check " + std::to_string(i) + " has " + std::to_string(c.size()) + " positions");
    require(std::is_sorted(c.begin(), c.end()) && std::adjacent_find(c.begin(), c.end()) == c.end() && c.back() < n,
            ErrorKind::kConfig, "PRC check " + std::to_string(i) + " positions must be distinct, ascending and < n");
    require(i == 0 || c.back() > prev_pivot, ErrorKind::kConfig, "PRC pivots must be strictly increasing");
    prev_pivot = c.back();
  }
}

PrcKey prc_generate_key(const SeededRng& rng, const Key256& sign_key, const Shape& shape, std::size_t checks,
                        std::size_t check_size) {
  const std::size_t n = shape.size();
  require(check_size >= 2, ErrorKind::kConfig, "PRC check size must be >= 2");
  require(checks >= 1 && checks <= n / 2 && checks + check_size <= n, ErrorKind::kConfig,
          "PRC parameters infeasible: r = " + std::to_string(checks) + ", t = " + std::to_string(check_size) +
              ", n = " + std::to_string(n));
  PrcKey key;
  key.shape = shape;
  key.check_size = check_size;
  key.sign_key = sign_key;

  // Pivots: a keyed sample of distinct positions from [t-1, n), ascending.
  const std::size_t lo = check_size - 1;
  const auto perm = keyed_permutation(rng.sub("pivots"), n - lo);
  std::vector<std::size_t> pivots(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(checks));
  for (auto& p : pivots) p += lo;
  std::sort(pivots.begin(), pivots.end());

  // Each check takes t-1 distinct positions strictly below its pivot, so the
  // pivot is the largest entry and can be solved last.
  const SeededRng pick = rng.sub("members");
  std::uint64_t cursor = 0;
  key.checks.reserve(checks);
  for (const std::size_t p : pivots) {
    std::vector<std::size_t> members;
    while (members.size() + 1 < check_size) {
      const std::size_t cand = static_cast<std::size_t>(pick.u64_at(cursor++) % p);
      if (std::find(members.begin(), members.end(), cand) == members.end()) members.push_back(cand);
    }
    std::sort(members.begin(), members.end());
    members.push_back(p);
    key.checks.push_back(std::move(members));
  }
  prc_validate(key);
  return key;
}

Tensor prc_embed(const PrcKey& key, std::uint64_t sample_id) {
  prc_validate(key);
  const std::size_t n = key.length();
  std::vector<std::uint64_t> raw(n);
  const SeededRng stream(key.sign_key, sample_id);
  stream.sub("signs").fill_u64(raw);
  std::vector<int> sign(n);
  for (std::size_t i = 0; i < n; ++i) sign[i] = (raw[i] & 1) ? 1 : -1;
  for (const auto& c : key.checks) {
    int prod = 1;
    for (std::size_t m = 0; m + 1 < c.size(); ++m) prod *= sign[c[m]];
    sign[c.back()] = prod;
  }
  Tensor out(key.shape);
  std::vector<double> g(n);
  stream.sub("magnitudes").fill_normal(g);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(g[i]) * sign[i];
  return out;
}

BitDetection prc_detect(const PrcKey& key, const Tensor& inverted) {
  prc_validate(key);
  require(inverted.shape() == key.shape, ErrorKind::kShape,
          "latent " + to_string(inverted.shape()) + " does not match PRC key " + to_string(key.shape));
  BitDetection r;
  for (const auto& c : key.checks) {
    bool negative = false;
    for (const std::size_t pos : c) negative ^= inverted[pos] < 0.0;
    r.matches += negative ? 0 : 1;
  }
  r.trials = key.checks.size();
  r.score = static_cast<double>(r.matches) / static_cast<double>(r.trials);
  r.p_value = binomial_tail_pvalue(r.trials, r.matches);
  return r;
}

}  // namespace lmk
