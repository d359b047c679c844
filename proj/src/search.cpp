#include "gapidx/search.hpp"

#include <algorithm>

namespace gapidx {

namespace {

// First index in [lo, hi) whose key is >= target, counting probes.
std::size_t lower_bound_counted(std::span<const Key> keys, std::size_t lo, std::size_t hi, Key target,
                                std::size_t& probes) noexcept {
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    ++probes;
    if (keys[mid] < target)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

SearchResult correct_binary(std::span<const Key> keys, const PredictedPosition& guess, Key key) noexcept {
  SearchResult r;
  if (keys.empty()) return r;
  const auto n = static_cast<Position>(keys.size());
  const Position v = std::clamp<Position>(guess.value, 0, n - 1);
  ++r.probes;
  if (keys[static_cast<std::size_t>(v)] == key) {
    r.position = v;
    return r;
  }
  // The miss at v tells us which side of the window can hold the key.
  auto lo = static_cast<std::size_t>(std::clamp<Position>(guess.lo, 0, n - 1));
  auto hi = static_cast<std::size_t>(std::clamp<Position>(guess.hi, 0, n - 1)) + 1;
  if (keys[static_cast<std::size_t>(v)] < key)
    lo = std::max(lo, static_cast<std::size_t>(v) + 1);
  else
    hi = std::min(hi, static_cast<std::size_t>(v));
  if (lo >= hi) return r;
  auto i = lower_bound_counted(keys, lo, hi, key, r.probes);
  if (i < hi && keys[i] == key) r.position = static_cast<Position>(i);
  return r;
}

SearchResult correct_exponential(std::span<const Key> keys, const PredictedPosition& guess, Key key) noexcept {
  SearchResult r;
  if (keys.empty()) return r;
  const std::size_t n = keys.size();
  const auto v = static_cast<std::size_t>(std::clamp<Position>(guess.value, 0, static_cast<Position>(n) - 1));
  ++r.probes;
  const Key at = keys[v];
  if (at == key) {
    r.position = static_cast<Position>(v);
    return r;
  }

  std::size_t lo, hi;  // search [lo, hi)
  if (at < key) {
    std::size_t radius = 1;
    std::size_t prev = v;
    while (true) {
      std::size_t probe = v + radius;
      if (probe >= n) {
        lo = prev + 1;
        hi = n;
        break;
      }
      ++r.probes;
      if (keys[probe] >= key) {
        lo = prev + 1;
        hi = probe + 1;
        break;
      }
      prev = probe;
      radius *= 2;
    }
  } else {
    std::size_t radius = 1;
    std::size_t prev = v;
    while (true) {
      if (radius > v) {
        lo = 0;
        hi = prev;
        break;
      }
      std::size_t probe = v - radius;
      ++r.probes;
      if (keys[probe] <= key) {
        lo = probe;
        hi = prev;
        break;
      }
      prev = probe;
      radius *= 2;
    }
  }
  auto i = lower_bound_counted(keys, lo, hi, key, r.probes);
  if (i < hi && keys[i] == key) r.position = static_cast<Position>(i);
  return r;
}

}  // namespace gapidx
