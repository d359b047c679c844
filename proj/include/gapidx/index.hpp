#pragma once

#include <concepts>
#include <span>
#include <string>
#include <variant>

#include "gapidx/baseline.hpp"
#include "gapidx/pla.hpp"
#include "gapidx/rmi.hpp"
#include "gapidx/search.hpp"

namespace gapidx {

/// Any index mechanism the evaluation framework can score.
using AnyIndex = std::variant<SegmentIndex, RmiIndex, BaselineIndex>;

template <typename T>
concept PositionPredictor = requires(const T& t, Key k) {
  { t.predict(k) } -> std::same_as<PredictedPosition>;
};

inline PredictedPosition predict(const AnyIndex& index, Key key) noexcept {
  return std::visit([key](const auto& i) { return i.predict(key); }, index);
}

/// Short method label: greedy, optimal, rmi, btree or binary.
std::string method_name(const AnyIndex& index);

/// Human-readable parameter summary, e.g. "eps=64" or "leaves=1024".
std::string param_summary(const AnyIndex& index);

/// Number of stored model parameters: 3 per segment (slope, intercept,
/// directory key); 2 for the RMI root plus 2 per leaf; one per B+ tree
/// separator; 0 for plain binary search.
std::size_t param_count(const AnyIndex& index);

/// Segment count, leaf count, B+ tree separator count, or 0.
std::size_t model_count(const AnyIndex& index);

/// True when predict()'s window is guaranteed to contain every indexed key.
bool has_exact_bounds(const AnyIndex& index);

/// Binary search within the window when bounds are exact, exponential search otherwise.
SearchResult correct(const AnyIndex& index, std::span<const Key> keys, const PredictedPosition& guess,
                     Key key) noexcept;

/// max |predict(x).value - y| over the pairs (0 for an empty span).
std::int64_t max_abs_error(const AnyIndex& index, std::span<const KeyPositionPair> pairs);

}  // namespace gapidx
