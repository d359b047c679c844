#pragma once

#include <optional>
#include <span>

#include "gapidx/pla.hpp"

namespace gapidx {

struct SearchResult {
  std::optional<Position> position;
  // Number of key comparisons against the array.
  std::size_t probes = 0;

  bool found() const noexcept { return position.has_value(); }
};

/// Checks the predicted slot, then binary-searches [guess.lo, guess.hi].
/// Keys outside the window are reported as not found.
SearchResult correct_binary(std::span<const Key> keys, const PredictedPosition& guess, Key key) noexcept;

/// Doubles a radius around guess.value until `key` is bracketed, then
/// binary-searches the bracket. Finds every present key for any guess.
SearchResult correct_exponential(std::span<const Key> keys, const PredictedPosition& guess, Key key) noexcept;

}  // namespace gapidx
