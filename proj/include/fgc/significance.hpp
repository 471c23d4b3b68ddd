//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_SIGNIFICANCE_HPP_
#define FGC_SIGNIFICANCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "fgc/errors.hpp"

namespace fgc::eval {

inline constexpr std::size_t kWilcoxonMinPairs = 6;
inline constexpr std::size_t kWilcoxonExactLimit = 25;

namespace internal {
  // Midranks of |d|, doubled so they stay integral under ties.
  inline std::vector<std::uint64_t>
  doubled_midranks(std::span<const double> abs_diff) {
    const std::size_t n = abs_diff.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return abs_diff[a] < abs_diff[b];
    });
    std::vector<std::uint64_t> ranks(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && abs_diff[order[j + 1]] == abs_diff[order[i]])
        ++j;
      // ranks i+1 .. j+1, doubled midrank = (i+1) + (j+1)
      const std::uint64_t r2 = (i + 1) + (j + 1);
      for (std::size_t k = i; k <= j; ++k)
        ranks[order[k]] = r2;
      i = j + 1;
    }
    return ranks;
  }
}  // namespace internal

/**
 * Two-sided Wilcoxon signed-rank test. Zero differences are dropped; ties in
 * |d| get midranks. Up to 25 pairs the null distribution of W+ is computed
 * exactly by dynamic programming over the signs; beyond that a normal
 * approximation with tie-corrected variance is used.
 */
inline double wilcoxon_signed_rank(std::span<const double> a,
                                   std::span<const double> b) {
  if (a.size() != b.size())
    throw DataError("wilcoxon_signed_rank needs paired samples");

  std::vector<double> abs_diff;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d == 0.0)
      continue;
    abs_diff.push_back(std::abs(d));
    positive.push_back(d > 0);
  }
  const std::size_t n = abs_diff.size();
  if (n < kWilcoxonMinPairs)
    throw TooFewPairs("wilcoxon_signed_rank needs at least "
                      + std::to_string(kWilcoxonMinPairs)
                      + " non-zero differences, got " + std::to_string(n));

  const std::vector<std::uint64_t> r2 = internal::doubled_midranks(abs_diff);
  std::uint64_t w2 = 0;
  std::uint64_t total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += r2[i];
    if (positive[i])
      w2 += r2[i];
  }

  if (n <= kWilcoxonExactLimit) {
    // ways[s] = number of sign patterns whose doubled W+ equals s.
    std::vector<double> ways(total2 + 1, 0.0);
    ways[0] = 1.0;
    std::uint64_t reach = 0;
    for (std::uint64_t r: r2) {
      for (std::uint64_t s = reach + 1; s-- > 0;) {
        if (ways[s] != 0.0)
          ways[s + r] += ways[s];
      }
      reach += r;
    }
    double lower = 0;
    double upper = 0;
    for (std::uint64_t s = 0; s <= total2; ++s) {
      if (s <= w2)
        lower += ways[s];
      if (s >= w2)
        upper += ways[s];
    }
    const double all = std::ldexp(1.0, static_cast<int>(n));
    return std::min(1.0, 2.0 * std::min(lower, upper) / all);
  }

  const auto dn = static_cast<double>(n);
  const double mean = dn * (dn + 1) / 4.0;
  double var = dn * (dn + 1) * (2 * dn + 1) / 24.0;
  std::vector<std::uint64_t> sorted = r2;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i])
      ++j;
    const auto t = static_cast<double>(j - i);
    var -= (t * t * t - t) / 48.0;
    i = j;
  }
  const double z = (static_cast<double>(w2) / 2.0 - mean) / std::sqrt(var);
  return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

/// Step-up rule: reject the k smallest p-values, k the largest index with
/// p_(k) <= k q / m.
inline std::vector<bool> benjamini_hochberg(std::span<const double> p,
                                            double q = 0.05) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (p[order[i]] < 0.0 || p[order[i]] > 1.0)
      throw DataError("p-values must lie in [0, 1]");
    if (p[order[i]] <= static_cast<double>(i + 1) * q / static_cast<double>(m))
      k = i + 1;
  }
  std::vector<bool> reject(m, false);
  for (std::size_t i = 0; i < k; ++i)
    reject[order[i]] = true;
  return reject;
}

/// BH-adjusted p-values; adjusted <= q exactly when benjamini_hochberg rejects.
inline std::vector<double> bh_adjust(std::span<const double> p) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> adj(m);
  double running = 1.0;
  for (std::size_t i = m; i-- > 0;) {
    const double v = p[order[i]] * static_cast<double>(m)
                     / static_cast<double>(i + 1);
    running = std::min(running, v);
    adj[order[i]] = std::min(1.0, running);
  }
  return adj;
}

}  // namespace fgc::eval

#endif  // FGC_SIGNIFICANCE_HPP_
