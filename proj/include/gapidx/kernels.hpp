#pragma once

// Data-parallel evaluation loops. Each kernel has an OpenMP version used by
// the library and a serial reference kept for tests and the benchmark.

#include <cmath>
#include <cstdint>
#include <span>

#include "gapidx/dataset.hpp"
#include "gapidx/index.hpp"

namespace gapidx::kernels {

/// Correction cost of one prediction under binary search: log2|e| + 1, and 1
/// for an exact prediction.
inline double log2_cost(std::int64_t error) noexcept {
  auto a = error < 0 ? -error : error;
  return a == 0 ? 1.0 : std::log2(static_cast<double>(a)) + 1.0;
}

struct ErrorStats {
  std::size_t count = 0;
  double sum_abs = 0.0;
  double sum_log2_cost = 0.0;
  std::int64_t max_abs = 0;

  double mae() const noexcept { return count ? sum_abs / static_cast<double>(count) : 0.0; }
  double mean_log2_cost() const noexcept { return count ? sum_log2_cost / static_cast<double>(count) : 0.0; }
};

/// Prediction errors over every key of the dataset (position = rank).
ErrorStats error_stats(const AnyIndex& index, std::span<const Key> keys);
ErrorStats error_stats_serial(const AnyIndex& index, std::span<const Key> keys);

/// Prediction errors over explicit (key, position) pairs.
ErrorStats error_stats(const AnyIndex& index, std::span<const KeyPositionPair> pairs);
ErrorStats error_stats_serial(const AnyIndex& index, std::span<const KeyPositionPair> pairs);

struct LookupStats {
  std::size_t queries = 0;
  std::size_t correct = 0;  // returned the key's true rank
  std::size_t probes = 0;
};

/// Runs predict + correct for every query key against the sorted key array.
LookupStats verify_lookups(const AnyIndex& index, std::span<const Key> keys, std::span<const Key> queries);
LookupStats verify_lookups_serial(const AnyIndex& index, std::span<const Key> keys,
                                  std::span<const Key> queries);

}  // namespace gapidx::kernels
