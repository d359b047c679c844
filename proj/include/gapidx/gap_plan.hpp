#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gapidx/pla.hpp"

namespace gapidx {

struct GapAnchor {
  Key first_key = 0;
  Key last_key = 0;
  double first_target = 0;
  double last_target = 0;
};

/// Gap-inserted target positions for a run of (key, position) pairs.
struct GapPlan {
  double rho = 0;
  std::vector<Key> keys;
  std::vector<double> targets;            // one per key, strictly increasing
  std::vector<std::int64_t> segment_gaps;  // U_k, one per segment that covers data
  std::vector<GapAnchor> anchors;

  std::int64_t total_gaps() const noexcept;
  /// ceil(max target) + 1.
  std::size_t slot_count() const noexcept;
  /// (key, round(target)) pairs to refit a model on.
  std::vector<KeyPositionPair> rounded_pairs() const;
};

/// Stretches each segment's position range by (1 + rho) about its first
/// point, shifted by the whole gaps of all earlier segments. Keys between the
/// two anchors are interpolated by key. rho == 0 returns the input positions
/// unchanged. Throws std::invalid_argument for
/// rho < 0, empty data or unsorted keys.
GapPlan plan_gaps(const SegmentIndex& segments, std::span<const KeyPositionPair> data, double rho);

}  // namespace gapidx
