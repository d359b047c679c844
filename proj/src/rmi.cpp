#include "gapidx/rmi.hpp"

#include <algorithm>
#include <stdexcept>

namespace gapidx {

namespace {

template <typename Range, typename Target>
LinearModel fit_line(const Range& pts, Target target) {
  LinearModel m;
  m.anchor = pts.front().key;
  const auto n = static_cast<long double>(pts.size());
  long double mx = 0, my = 0;
  for (const auto& p : pts) {
    mx += static_cast<long double>(p.key - m.anchor);
    my += static_cast<long double>(target(p));
  }
  mx /= n;
  my /= n;
  long double sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    long double dx = static_cast<long double>(p.key - m.anchor) - mx;
    sxx += dx * dx;
    sxy += dx * (static_cast<long double>(target(p)) - my);
  }
  long double slope = sxx > 0 ? sxy / sxx : 0;
  m.slope = static_cast<double>(slope);
  m.intercept = static_cast<double>(my - slope * mx);
  return m;
}

}  // namespace

LinearModel least_squares(std::span<const KeyPositionPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("least squares needs at least one pair");
  return fit_line(pairs, [](const KeyPositionPair& p) { return p.position; });
}

RmiIndex::RmiIndex(LinearModel root, std::vector<RmiLeaf> leaves, Position position_limit)
    : root_(root), leaves_(std::move(leaves)), limit_(position_limit) {
  if (leaves_.empty()) throw std::invalid_argument("rmi needs at least one leaf");
  if (limit_ < 1) throw std::invalid_argument("position limit must be positive");
}

std::size_t RmiIndex::untrained_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(leaves_.begin(), leaves_.end(),
                                                [](const RmiLeaf& l) { return !l.trained; }));
}

RmiIndex fit_rmi(std::span<const KeyPositionPair> pairs, std::size_t leaf_count, Position position_limit) {
  if (pairs.empty()) throw std::invalid_argument("cannot fit an empty pair sequence");
  if (leaf_count == 0) throw std::invalid_argument("leaf_count must be >= 1");
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i].key <= pairs[i - 1].key) throw std::invalid_argument("pairs must be strictly ascending by key");

  Position limit = pairs.back().position + 1;
  if (position_limit > limit) limit = position_limit;

  const auto leaves_ld = static_cast<long double>(leaf_count);
  const auto limit_ld = static_cast<long double>(limit);
  LinearModel root;
  if (leaf_count > 1) {
    root = fit_line(pairs, [&](const KeyPositionPair& p) {
      auto id = static_cast<Position>(static_cast<long double>(p.position) * leaves_ld / limit_ld);
      return static_cast<long double>(std::min<Position>(id, static_cast<Position>(leaf_count) - 1));
    });
  } else {
    root.anchor = pairs.front().key;
  }

  std::vector<std::vector<KeyPositionPair>> buckets(leaf_count);
  for (const auto& p : pairs)
    buckets[static_cast<std::size_t>(round_clamp(root.eval(p.key), static_cast<Position>(leaf_count)))]
        .push_back(p);

  std::vector<RmiLeaf> leaves(leaf_count);
  for (std::size_t id = 0; id < leaf_count; ++id) {
    const auto& bucket = buckets[id];
    if (bucket.empty()) continue;
    auto& leaf = leaves[id];
    leaf.model = least_squares(bucket);
    leaf.trained = true;
    leaf.routed = bucket.size();
    for (const auto& p : bucket) {
      auto err = round_clamp(leaf.model.eval(p.key), limit) - p.position;
      leaf.max_positive_error = std::max(leaf.max_positive_error, err);
      leaf.min_negative_error = std::min(leaf.min_negative_error, err);
    }
  }
  return RmiIndex(root, std::move(leaves), limit);
}

}  // namespace gapidx
