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
#include <span>
#include <vector>

namespace lmk {

double gaussian_cdf(double x);

/// Inverse of gaussian_cdf on (0, 1); p outside the open interval is a domain error.
double gaussian_ppf(double p);

/// P(X >= successes) for X ~ Binomial(trials, p_success), summed exactly in
/// log space.
double binomial_tail_pvalue(std::uint64_t trials, std::uint64_t successes, double p_success = 0.5);

/// Smallest success count whose upper-tail p-value is strictly below alpha
/// (trials + 1 when no count qualifies).
std::uint64_t min_successes_for_alpha(std::uint64_t trials, double alpha, double p_success = 0.5);

/// One-sample Kolmogorov-Smirnov statistic against the standard normal CDF.
double ks_statistic_normal(std::span<const double> samples);

/// One-sample KS statistic against Uniform(0,1), one-sided: sup(F_n(x) - x).
/// Values above zero mean the sample sits left of uniform (anti-conservative p-values).
double ks_excess_over_uniform(std::span<const double> samples);

double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic critical value sqrt(-ln(alpha/2) / 2) / sqrt(n_eff).
double ks_critical(double alpha, double n_eff);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(std::span<const double> values);

}  // namespace lmk
