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

// Independent reference computations for tests. None of these call into the
// library's numeric code; they are slow and written for clarity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace lmk::oracle {

using BigFloat = boost::multiprecision::cpp_bin_float_100;

/// P(X >= k) for X ~ Binomial(n, p), summed term by term at 100 digits.
inline std::vector<double> binomial_upper_tails(std::uint64_t n, double p) {
  const BigFloat bp(p);
  const BigFloat bq = BigFloat(1) - bp;
  std::vector<BigFloat> pmf(n + 1);
  pmf[0] = boost::multiprecision::pow(bq, static_cast<int>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    pmf[i + 1] = pmf[i] * BigFloat(n - i) / BigFloat(i + 1) * bp / bq;
  }
  std::vector<double> tails(n + 1);
  BigFloat acc = 0;
  for (std::uint64_t k = n + 1; k-- > 0;) {
    acc += pmf[k];
    tails[k] = static_cast<double>(acc);
  }
  return tails;
}

/// erf by its Maclaurin series (|x| <= 3) at 100 digits.
inline double erf_series(double x) {
  const BigFloat bx(x);
  BigFloat term = bx;
  BigFloat sum = bx;
  for (int n = 1; n < 400; ++n) {
    term *= -bx * bx / BigFloat(n);
    sum += term / BigFloat(2 * n + 1);
  }
  return static_cast<double>(sum * 2 / boost::multiprecision::sqrt(boost::math::constants::pi<BigFloat>()));
}

inline double normal_cdf(double x) { return 0.5 * (1.0 + erf_series(x / std::numbers::sqrt2)); }

/// O(N^2) 2D DFT of a real plane, unnormalized, natural (uncentered) order.
inline std::vector<std::complex<double>> naive_dft2(const std::vector<double>& plane, std::size_t h,
                                                    std::size_t w) {
  std::vector<std::complex<double>> out(h * w);
  for (std::size_t u = 0; u < h; ++u) {
    for (std::size_t v = 0; v < w; ++v) {
      std::complex<long double> acc = 0;
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
          const long double ang = -2.0L * std::numbers::pi_v<long double> *
                                  (static_cast<long double>(u * y) / h + static_cast<long double>(v * x) / w);
          acc += static_cast<long double>(plane[y * w + x]) * std::complex<long double>(std::cos(ang), std::sin(ang));
        }
      }
      out[u * w + v] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }
  }
  return out;
}

struct SweepResult {
  double fpr = 0.0;
  double tpr = 0.0;
};

/// Tries every distinct cut point and keeps the one with the largest FPR not
/// above target, breaking ties by the larger TPR. `higher` selects the side
/// on which scores count as watermarked; ties at the cut follow the library
/// rule (>= for higher, < for lower).
inline SweepResult brute_force_sweep(const std::vector<double>& wm, const std::vector<double>& nulls, bool higher,
                                     double target) {
  std::vector<double> cuts{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto* set : {&wm, &nulls}) {
    for (const double v : *set) {
      cuts.push_back(v);
      cuts.push_back(std::nextafter(v, std::numeric_limits<double>::infinity()));
    }
  }
  auto positive = [&](double s, double tau) { return higher ? s >= tau : s < tau; };
  SweepResult best{-1.0, -1.0};
  for (const double tau : cuts) {
    const double fp = static_cast<double>(std::count_if(nulls.begin(), nulls.end(), [&](double s) { return positive(s, tau); }));
    const double tp = static_cast<double>(std::count_if(wm.begin(), wm.end(), [&](double s) { return positive(s, tau); }));
    const double fpr = fp / static_cast<double>(nulls.size());
    const double tpr = tp / static_cast<double>(wm.size());
    if (fpr > target + 1e-12) continue;
    if (fpr > best.fpr || (fpr == best.fpr && tpr > best.tpr)) best = {fpr, tpr};
  }
  return best;
}

}  // namespace lmk::oracle
