#pragma once

#include <cstdint>
#include <string_view>

#include "gapidx/dataset.hpp"

namespace gapidx {

enum class SyntheticKind { linear, piecewise_linear, lognormal, staircase };

/// Parses "linear", "piecewise", "lognormal", "staircase" (and a few aliases).
SyntheticKind parse_synthetic_kind(std::string_view name);
std::string_view to_string(SyntheticKind kind);

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::linear;
  std::size_t n = 0;
  // Keys are jittered uniformly in [-noise, +noise] before re-sorting.
  // Ignored by the lognormal kind.
  std::uint64_t noise = 0;
  // Number of slope changes for the piecewise and staircase kinds.
  std::size_t breakpoints = 0;
  std::uint64_t seed = 0;
};

/// Deterministic for a fixed spec. With noise == 0 the piecewise and staircase
/// kinds change their key step exactly `breakpoints` times; the lognormal kind
/// always returns exactly n keys, the others may lose a few keys to jitter
/// collisions. Throws std::invalid_argument for n == 0.
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace gapidx
