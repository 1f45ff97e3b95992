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

#include "lmk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lmk/error.hpp"

namespace lmk {

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double gaussian_ppf(double p) {
  require(p > 0.0 && p < 1.0, ErrorKind::kDomain,
          "gaussian_ppf requires p in (0, 1), got " + std::to_string(p));
  if (p > 0.5) return -gaussian_ppf(1.0 - p);

  // Acklam's rational approximation (lower half), then one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double e = gaussian_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double binomial_tail_pvalue(std::uint64_t trials, std::uint64_t successes, double p_success) {
  require(successes <= trials, ErrorKind::kDomain,
          "binomial tail: successes " + std::to_string(successes) + " exceed trials " +
              std::to_string(trials));
  require(p_success >= 0.0 && p_success <= 1.0, ErrorKind::kDomain,
          "binomial tail: success probability outside [0, 1]");
  if (successes == 0) return 1.0;
  if (p_success == 0.0) return 0.0;
  if (p_success == 1.0) return 1.0;

  const double n = static_cast<double>(trials);
  const double log_p = std::log(p_success);
  const double log_q = std::log1p(-p_success);
  const double log_n_fact = std::lgamma(n + 1.0);
  auto log_pmf = [&](std::uint64_t k) {
    const double kd = static_cast<double>(k);
    return log_n_fact - std::lgamma(kd + 1.0) - std::lgamma(n - kd + 1.0) + kd * log_p +
           (n - kd) * log_q;
  };
  // Terms are unimodal in k; stabilize by the largest term in range.
  const auto mode = static_cast<std::uint64_t>(std::floor((n + 1.0) * p_success));
  const std::uint64_t peak = std::clamp(mode, successes, trials);
  const double log_max = log_pmf(peak);
  double sum = 0.0;
  for (std::uint64_t k = successes; k <= trials; ++k) {
    const double term = std::exp(log_pmf(k) - log_max);
    sum += term;
    if (k > peak && term < 1e-18 * sum) break;
  }
  return std::min(1.0, std::exp(log_max + std::log(sum)));
}

std::uint64_t min_successes_for_alpha(std::uint64_t trials, double alpha, double p_success) {
  // Tail is nonincreasing in the count, so binary search.
  std::uint64_t lo = 0;
  std::uint64_t hi = trials + 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (binomial_tail_pvalue(trials, mid, p_success) < alpha) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

namespace {

template <typename Cdf>
double ks_one_sample(std::span<const double> samples, Cdf cdf, bool one_sided_excess) {
  require(!samples.empty(), ErrorKind::kDomain, "KS statistic of an empty sample");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    // Treat tied values as one jump so discrete samples are handled exactly.
    if (i + 1 < s.size() && s[i + 1] == s[i]) continue;
    const double f = cdf(s[i]);
    const double upper = static_cast<double>(i + 1) / n - f;
    d = std::max(d, upper);
    if (!one_sided_excess) {
      std::size_t first = i;
      while (first > 0 && s[first - 1] == s[i]) --first;
      d = std::max(d, f - static_cast<double>(first) / n);
    }
  }
  return d;
}

}  // namespace

double ks_statistic_normal(std::span<const double> samples) {
  return ks_one_sample(samples, gaussian_cdf, false);
}

double ks_excess_over_uniform(std::span<const double> samples) {
  return ks_one_sample(samples, [](double x) { return std::clamp(x, 0.0, 1.0); }, true);
}

double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::kDomain, "KS statistic of an empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / x.size() - static_cast<double>(j) / y.size()));
  }
  return d;
}

double ks_critical(double alpha, double n_eff) {
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(n_eff);
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) return {};
  double m = 0.0;
  for (double v : values) m += v;
  m /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / static_cast<double>(values.size()))};
}

}  // namespace lmk
