#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace testing {

// Average ranks of |d|, computed by sorting.
inline std::vector<double> oracle_ranks(const std::vector<double>& d) {
  std::vector<std::size_t> idx(d.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return std::fabs(d[a]) < std::fabs(d[b]); });
  std::vector<double> r(d.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && std::fabs(d[idx[j]]) == std::fabs(d[idx[i]])) ++j;
    double avg = (double(i + 1) + double(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = avg;
    i = j;
  }
  return r;
}

// Two-sided p from all 2^n sign assignments.
inline double brute_force_p(std::vector<double> d) {
  std::erase(d, 0.0);
  auto r = oracle_ranks(d);
  double wp = 0, wm = 0;
  for (std::size_t i = 0; i < d.size(); ++i) (d[i] > 0 ? wp : wm) += r[i];
  double w = std::min(wp, wm);
  std::size_t n = d.size(), hits = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) t += r[i];
    }
    if (t <= w + 1e-9) ++hits;
  }
  return std::min(1.0, 2.0 * double(hits) / double(std::size_t{1} << n));
}

}  // namespace testing
