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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lmk/error.hpp"
#include "lmk/stats.hpp"
#include "oracles.hpp"

namespace lmk {
namespace {

TEST(GaussianCdf, MatchesSeriesErf) {
  for (double x = -4.0; x <= 4.0; x += 0.125) {
    EXPECT_NEAR(gaussian_cdf(x), oracle::normal_cdf(x), 1e-14) << "x=" << x;
  }
}

TEST(GaussianPpf, InvertsCdf) {
  for (double p : {1e-12, 1e-6, 0.001, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999999}) {
    EXPECT_NEAR(gaussian_cdf(gaussian_ppf(p)), p, 1e-12 + 1e-9 * p) << "p=" << p;
  }
  EXPECT_DOUBLE_EQ(gaussian_ppf(0.5), 0.0);
}

TEST(BinomialTail, MatchesMultiprecisionSum) {
  for (const std::uint64_t n : {1, 2, 7, 32, 64, 256, 1024}) {
    for (const double p : {0.5, 0.1, 0.9}) {
      const auto tails = oracle::binomial_upper_tails(n, p);
      for (std::uint64_t k = 0; k <= n; ++k) {
        if (tails[k] < 1e-300) continue;
        EXPECT_NEAR(binomial_tail_pvalue(n, k, p) / tails[k], 1.0, 1e-9) << n << " " << k << " " << p;
      }
    }
  }
}

TEST(BinomialTail, EdgeCases) {
  EXPECT_EQ(binomial_tail_pvalue(10, 0), 1.0);
  EXPECT_EQ(binomial_tail_pvalue(10, 5, 0.0), 0.0);
  EXPECT_EQ(binomial_tail_pvalue(10, 5, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(binomial_tail_pvalue(1, 1), 0.5);
  EXPECT_THROW(binomial_tail_pvalue(3, 4), Error);
  EXPECT_THROW(binomial_tail_pvalue(3, 1, 1.5), Error);
}

TEST(BinomialTail, MonotoneInSuccesses) {
  double prev = 1.0;
  for (std::uint64_t k = 0; k <= 200; ++k) {
    const double p = binomial_tail_pvalue(200, k);
    EXPECT_LE(p, prev);
    prev = p;
  }
}

TEST(MinSuccesses, IsSmallestCountBelowAlpha) {
  for (const std::uint64_t n : {16, 64, 256, 1000}) {
    for (const double alpha : {0.05, 0.01, 1e-6}) {
      const auto k = min_successes_for_alpha(n, alpha);
      ASSERT_LE(k, n + 1);
      if (k <= n) EXPECT_LT(binomial_tail_pvalue(n, k), alpha);
      if (k > 0) EXPECT_GE(binomial_tail_pvalue(n, k - 1), alpha);
    }
  }
}

TEST(KolmogorovSmirnov, NormalSampleStaysUnderCritical) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  std::vector<double> x(20000);
  for (double& v : x) v = normal(gen);
  EXPECT_LT(ks_statistic_normal(x), ks_critical(0.01, static_cast<double>(x.size())));
}

TEST(KolmogorovSmirnov, ShiftedSampleIsRejected) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> normal(0.1, 1.0);
  std::vector<double> x(20000);
  for (double& v : x) v = normal(gen);
  EXPECT_GT(ks_statistic_normal(x), ks_critical(0.01, static_cast<double>(x.size())));
}

TEST(KolmogorovSmirnov, StatisticMatchesDirectDefinition) {
  const std::vector<double> x{-1.0, 0.2, 0.3, 2.0};
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = oracle::normal_cdf(x[i]);
    d = std::max({d, (i + 1) / 4.0 - f, f - i / 4.0});
  }
  EXPECT_NEAR(ks_statistic_normal(x), d, 1e-12);
}

TEST(KolmogorovSmirnov, ExcessOverUniformIsOneSided) {
  // All mass at 1 never exceeds the uniform CDF; all mass near 0 does.
  EXPECT_NEAR(ks_excess_over_uniform(std::vector<double>(50, 1.0)), 0.0, 1e-12);
  EXPECT_NEAR(ks_excess_over_uniform(std::vector<double>(50, 0.0)), 1.0, 1e-12);
}

TEST(KolmogorovSmirnov, TwoSample) {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{1, 2, 3, 4};
  EXPECT_EQ(ks_statistic_two_sample(a, b), 0.0);
  const std::vector<double> c{10, 11};
  EXPECT_EQ(ks_statistic_two_sample(a, c), 1.0);
}

TEST(MeanStd, PopulationMoments) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  const auto ms = mean_std(v);
  EXPECT_DOUBLE_EQ(ms.mean, 5.0);
  EXPECT_DOUBLE_EQ(ms.std, 2.0);
}

}  // namespace
}  // namespace lmk
