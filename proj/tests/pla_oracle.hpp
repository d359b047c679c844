#pragma once

// Exhaustive reference for the minimum number of epsilon-bounded segments.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gapidx/dataset.hpp"

namespace oracle {

using i128 = __int128;

// A line within +-eps of every pair in [i, j] exists iff every slope lower
// bound (y_q - y_p - 2eps) / (x_q - x_p) is at most every upper bound
// (y_q - y_p + 2eps) / (x_q - x_p), over all p < q in the range.
inline bool feasible(std::span<const gapidx::KeyPositionPair> p, std::size_t i, std::size_t j, std::int64_t eps) {
  i128 lo_num = -1, lo_den = 0;  // -infinity
  i128 hi_num = 1, hi_den = 0;   // +infinity
  for (std::size_t a = i; a <= j; ++a)
    for (std::size_t b = a + 1; b <= j; ++b) {
      const i128 dx = static_cast<i128>(p[b].key) - static_cast<i128>(p[a].key);
      const i128 dy = static_cast<i128>(p[b].position) - p[a].position;
      const i128 lo = dy - 2 * eps, hi = dy + 2 * eps;
      if (lo_den == 0 || lo * lo_den > lo_num * dx) lo_num = lo, lo_den = dx;
      if (hi_den == 0 || hi * hi_den < hi_num * dx) hi_num = hi, hi_den = dx;
    }
  if (lo_den == 0 || hi_den == 0) return true;
  return lo_num * hi_den <= hi_num * lo_den;
}

inline std::size_t min_segments(std::span<const gapidx::KeyPositionPair> p, std::int64_t eps) {
  const std::size_t n = p.size();
  std::vector<std::size_t> best(n + 1, std::numeric_limits<std::size_t>::max());
  best[0] = 0;
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t i = j; i-- > 0;) {
      if (!feasible(p, i, j - 1, eps)) break;
      best[j] = std::min(best[j], best[i] + 1);
    }
  return best[n];
}

}  // namespace oracle
