#include "gapidx/kernels.hpp"

#include <algorithm>

namespace gapidx::kernels {

namespace {

template <typename Model, typename At>
ErrorStats stats_serial(const Model& m, std::size_t n, At at) {
  ErrorStats s;
  s.count = n;
  for (std::size_t i = 0; i < n; ++i) {
    auto [key, pos] = at(i);
    auto e = m.predict(key).value - pos;
    auto a = e < 0 ? -e : e;
    s.sum_abs += static_cast<double>(a);
    s.sum_log2_cost += log2_cost(a);
    s.max_abs = std::max(s.max_abs, a);
  }
  return s;
}

template <typename Model, typename At>
ErrorStats stats_parallel(const Model& m, std::size_t n, At at) {
  double sum_abs = 0.0;
  double sum_log = 0.0;
  std::int64_t max_abs = 0;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) reduction(+ : sum_abs, sum_log) reduction(max : max_abs)
  for (std::int64_t i = 0; i < count; ++i) {
    auto [key, pos] = at(static_cast<std::size_t>(i));
    auto e = m.predict(key).value - pos;
    auto a = e < 0 ? -e : e;
    sum_abs += static_cast<double>(a);
    sum_log += log2_cost(a);
    max_abs = std::max(max_abs, a);
  }
  return {n, sum_abs, sum_log, max_abs};
}

auto key_at(std::span<const Key> keys) {
  return [keys](std::size_t i) { return std::pair<Key, Position>{keys[i], static_cast<Position>(i)}; };
}

auto pair_at(std::span<const KeyPositionPair> pairs) {
  return [pairs](std::size_t i) { return std::pair<Key, Position>{pairs[i].key, pairs[i].position}; };
}

template <typename Model>
bool lookup_one(const Model& m, bool exact, std::span<const Key> keys, Key q, std::size_t& probes) {
  auto guess = m.predict(q);
  auto r = exact ? correct_binary(keys, guess, q) : correct_exponential(keys, guess, q);
  probes += r.probes;
  if (!r.position) return false;
  return keys[static_cast<std::size_t>(*r.position)] == q;
}

}  // namespace

ErrorStats error_stats(const AnyIndex& index, std::span<const Key> keys) {
  return std::visit([&](const auto& m) { return stats_parallel(m, keys.size(), key_at(keys)); }, index);
}

ErrorStats error_stats_serial(const AnyIndex& index, std::span<const Key> keys) {
  return std::visit([&](const auto& m) { return stats_serial(m, keys.size(), key_at(keys)); }, index);
}

ErrorStats error_stats(const AnyIndex& index, std::span<const KeyPositionPair> pairs) {
  return std::visit([&](const auto& m) { return stats_parallel(m, pairs.size(), pair_at(pairs)); }, index);
}

ErrorStats error_stats_serial(const AnyIndex& index, std::span<const KeyPositionPair> pairs) {
  return std::visit([&](const auto& m) { return stats_serial(m, pairs.size(), pair_at(pairs)); }, index);
}

LookupStats verify_lookups(const AnyIndex& index, std::span<const Key> keys, std::span<const Key> queries) {
  const bool exact = has_exact_bounds(index);
  std::size_t correct = 0;
  std::size_t probes = 0;
  const auto count = static_cast<std::int64_t>(queries.size());
  std::visit(
      [&](const auto& m) {
#pragma omp parallel for schedule(static) reduction(+ : correct, probes)
        for (std::int64_t i = 0; i < count; ++i) {
          const Key q = queries[static_cast<std::size_t>(i)];
          std::size_t p = 0;
          bool ok = lookup_one(m, exact, keys, q, p);
          probes += p;
          correct += ok ? 1 : 0;
        }
      },
      index);
  return {queries.size(), correct, probes};
}

LookupStats verify_lookups_serial(const AnyIndex& index, std::span<const Key> keys,
                                  std::span<const Key> queries) {
  const bool exact = has_exact_bounds(index);
  LookupStats s;
  s.queries = queries.size();
  std::visit(
      [&](const auto& m) {
        for (Key q : queries) s.correct += lookup_one(m, exact, keys, q, s.probes) ? 1 : 0;
      },
      index);
  return s;
}

}  // namespace gapidx::kernels
