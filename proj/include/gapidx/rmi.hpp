#pragma once

#include <span>
#include <vector>

#include "gapidx/pla.hpp"

namespace gapidx {

/// f(x) = slope * (x - anchor) + intercept.
struct LinearModel {
  Key anchor = 0;
  double slope = 0.0;
  double intercept = 0.0;

  double eval(Key x) const noexcept { return slope * key_offset(x, anchor) + intercept; }

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

/// Ordinary least squares over (key - anchor, position); anchor is the first key.
/// A single pair yields a constant model.
LinearModel least_squares(std::span<const KeyPositionPair> pairs);

struct RmiLeaf {
  LinearModel model;
  // Extremes of (prediction - position) over the training keys routed here.
  std::int64_t max_positive_error = 0;
  std::int64_t min_negative_error = 0;
  std::size_t routed = 0;
  bool trained = false;

  friend bool operator==(const RmiLeaf&, const RmiLeaf&) = default;
};

/// Two-layer recursive model index with linear models in both layers.
class RmiIndex {
 public:
  RmiIndex() = default;
  RmiIndex(LinearModel root, std::vector<RmiLeaf> leaves, Position position_limit);

  std::size_t route(Key key) const noexcept {
    auto id = round_clamp(root_.eval(key), static_cast<Position>(leaves_.size()));
    return static_cast<std::size_t>(id);
  }

  PredictedPosition predict(Key key) const noexcept {
    const auto& leaf = leaves_[route(key)];
    Position v = round_clamp(leaf.model.eval(key), limit_);
    // position = prediction - error, error in [min_negative, max_positive]
    return {v, std::max<Position>(0, v - leaf.max_positive_error),
            std::min<Position>(limit_ - 1, v - leaf.min_negative_error)};
  }

  const LinearModel& root() const noexcept { return root_; }
  std::span<const RmiLeaf> leaves() const noexcept { return leaves_; }
  std::vector<RmiLeaf>& mutable_leaves() noexcept { return leaves_; }
  std::size_t leaf_count() const noexcept { return leaves_.size(); }
  std::size_t untrained_count() const noexcept;
  Position position_limit() const noexcept { return limit_; }

  bool exact_bounds() const noexcept { return exact_bounds_; }
  void set_exact_bounds(bool v) noexcept { exact_bounds_ = v; }

  friend bool operator==(const RmiIndex&, const RmiIndex&) = default;

 private:
  LinearModel root_;
  std::vector<RmiLeaf> leaves_;
  Position limit_ = 1;
  bool exact_bounds_ = true;
};

/// Root: least squares over (key, leaf id) with leaf ids from an equal-width
/// partition of the position range; leaves: least squares over the pairs the
/// root routes to them. Leaves that receive nothing stay untrained.
/// Throws std::invalid_argument for empty input, leaf_count == 0 or unsorted keys.
RmiIndex fit_rmi(std::span<const KeyPositionPair> pairs, std::size_t leaf_count,
                 Position position_limit = 0);

}  // namespace gapidx
