#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gapidx/dataset.hpp"

namespace gapidx {

/// Signed distance x - anchor as a double, exact below 2^53.
inline double key_offset(Key x, Key anchor) noexcept {
  return x >= anchor ? static_cast<double>(x - anchor) : -static_cast<double>(anchor - x);
}

/// Round half up, then clamp into [0, limit - 1].
inline Position round_clamp(double raw, Position limit) noexcept {
  if (!(raw > 0.0)) return 0;  // also catches NaN
  double r = std::floor(raw + 0.5);
  if (r >= static_cast<double>(limit - 1)) return limit - 1;
  return static_cast<Position>(r);
}

/// Predicted slot plus the inclusive window the correction step searches.
struct PredictedPosition {
  Position value = 0;
  Position lo = 0;
  Position hi = 0;
};

/// A line anchored at `first_key`: f(x) = slope * (x - first_key) + intercept.
/// last_key and the two positions record the training points at either end.
struct LinearSegment {
  Key first_key = 0;
  Key last_key = 0;
  double slope = 0.0;
  double intercept = 0.0;
  Position first_pos = 0;
  Position last_pos = 0;

  double eval(Key x) const noexcept { return slope * key_offset(x, first_key) + intercept; }

  friend bool operator==(const LinearSegment&, const LinearSegment&) = default;
};

enum class PlaAlgorithm : std::uint32_t { greedy_cone = 1, optimal = 2 };

std::string_view to_string(PlaAlgorithm a);

/// Piecewise-linear index with a flat directory of segment first keys.
class SegmentIndex {
 public:
  SegmentIndex() = default;
  SegmentIndex(std::vector<LinearSegment> segments, std::int64_t epsilon, PlaAlgorithm algorithm,
               Position position_limit);

  /// Index of the segment whose range contains `key`; keys before the first
  /// segment use segment 0, keys after a segment's last key use that segment
  /// until the next one starts.
  std::size_t find_segment(Key key) const noexcept;

  PredictedPosition predict(Key key) const noexcept {
    const auto& s = segments_[find_segment(key)];
    Position v = round_clamp(s.eval(key), limit_);
    return {v, std::max<Position>(0, v - epsilon_), std::min<Position>(limit_ - 1, v + epsilon_)};
  }

  std::span<const LinearSegment> segments() const noexcept { return segments_; }
  std::span<const Key> directory() const noexcept { return first_keys_; }
  std::size_t segment_count() const noexcept { return segments_.size(); }
  std::int64_t epsilon() const noexcept { return epsilon_; }
  PlaAlgorithm algorithm() const noexcept { return algorithm_; }
  Position position_limit() const noexcept { return limit_; }

  /// False when the index was learned from a sample, so the epsilon window
  /// is not guaranteed to contain the true position of unseen keys.
  bool exact_bounds() const noexcept { return exact_bounds_; }
  void set_exact_bounds(bool v) noexcept { exact_bounds_ = v; }

  friend bool operator==(const SegmentIndex&, const SegmentIndex&) = default;

 private:
  std::vector<LinearSegment> segments_;
  std::vector<Key> first_keys_;
  std::int64_t epsilon_ = 0;
  PlaAlgorithm algorithm_ = PlaAlgorithm::optimal;
  Position limit_ = 1;
  bool exact_bounds_ = true;
};

/// Shrinking-cone segmentation: each segment passes through its first point and
/// is extended while some slope keeps every covered point within +-epsilon.
/// `position_limit` of 0 means last position + 1. Throws std::invalid_argument
/// on empty or unsorted input or negative epsilon.
SegmentIndex fit_greedy_cone(std::span<const KeyPositionPair> pairs, std::int64_t epsilon,
                             Position position_limit = 0);

/// Minimum-segment epsilon-bounded piecewise-linear fit (streaming convex hull
/// of the feasible line region, extended maximally per segment).
SegmentIndex fit_optimal_pla(std::span<const KeyPositionPair> pairs, std::int64_t epsilon,
                             Position position_limit = 0);

SegmentIndex fit_segments(PlaAlgorithm algorithm, std::span<const KeyPositionPair> pairs,
                          std::int64_t epsilon, Position position_limit = 0);

}  // namespace gapidx
