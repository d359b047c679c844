#pragma once

#include <cstdint>
#include <span>

#include "gapidx/gap_plan.hpp"
#include "gapidx/gapped_array.hpp"
#include "gapidx/sampling.hpp"

namespace gapidx {

struct GapMetrics {
  std::size_t n = 0;
  std::size_t sample_size = 0;
  std::size_t slots = 0;
  std::size_t segments = 0;  // planning segments K
  std::int64_t total_gaps = 0;
  double gap_budget = 0;  // rho * n + K, positions being ranks in the full data
  // Refit model against the slot each key ended up in.
  double mae_physical = 0;
  std::int64_t max_physical = 0;
  // Refit model against the planned targets of the sampled keys.
  double mae_target = 0;
  double gap_fraction = 0;
  std::size_t linked_keys = 0;
  std::int64_t build_ns = 0;
};

struct GappedBuild {
  AnyIndex model;
  GappedArray array;
  GapPlan plan;
  GapMetrics metrics;
};

/// sample -> fit -> plan gaps on the sample -> refit on (key, rounded target)
/// -> place all keys with the refit model. Gaps are planned from a
/// piecewise-linear fit at params.epsilon (optimal PLA when method is rmi).
/// `payloads` defaults to each key's rank; otherwise it must match the dataset size.
GappedBuild learn_with_gaps(const Dataset& dataset, const SampleSpec& spec, LearnMethod method,
                            const LearnParams& params, double rho, std::span<const Payload> payloads = {});

}  // namespace gapidx
