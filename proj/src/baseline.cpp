#include "gapidx/baseline.hpp"

#include <algorithm>
#include <stdexcept>

namespace gapidx {

BaselineIndex BaselineIndex::binary_search(std::size_t n) {
  if (n == 0) throw std::invalid_argument("baseline over an empty dataset");
  BaselineIndex b;
  b.kind_ = BaselineKind::binary_search;
  b.n_ = n;
  return b;
}

BaselineIndex BaselineIndex::btree(std::span<const Key> keys, std::size_t page_size, std::size_t fanout) {
  if (keys.empty()) throw std::invalid_argument("baseline over an empty dataset");
  if (page_size == 0 || fanout < 2) throw std::invalid_argument("btree needs page_size >= 1 and fanout >= 2");
  BaselineIndex b;
  b.kind_ = BaselineKind::btree;
  b.n_ = keys.size();
  b.page_size_ = page_size;
  b.fanout_ = fanout;

  std::vector<Key> level;
  for (std::size_t i = 0; i < keys.size(); i += page_size) level.push_back(keys[i]);
  b.levels_.push_back(level);
  while (b.levels_.back().size() > fanout) {
    const auto& below = b.levels_.back();
    std::vector<Key> up;
    for (std::size_t i = 0; i < below.size(); i += fanout) up.push_back(below[i]);
    b.levels_.push_back(std::move(up));
  }
  return b;
}

BaselineIndex BaselineIndex::from_parts(BaselineKind kind, std::size_t n, std::size_t page_size,
                                        std::size_t fanout, std::vector<std::vector<Key>> levels) {
  BaselineIndex b;
  b.kind_ = kind;
  b.n_ = n;
  b.page_size_ = page_size;
  b.fanout_ = fanout;
  b.levels_ = std::move(levels);
  if (n == 0 || (kind == BaselineKind::btree && (b.levels_.empty() || page_size == 0 || fanout < 2)))
    throw std::invalid_argument("malformed baseline index");
  return b;
}

std::size_t BaselineIndex::separator_count() const noexcept {
  std::size_t c = 0;
  for (const auto& l : levels_) c += l.size();
  return c;
}

PredictedPosition BaselineIndex::predict(Key key) const noexcept {
  const auto last = static_cast<Position>(n_) - 1;
  if (kind_ == BaselineKind::binary_search) return {last / 2, 0, last};

  // Descend from the root; at each level pick the last child whose first key <= key.
  std::size_t child = 0;
  for (std::size_t l = levels_.size(); l-- > 0;) {
    const auto& level = levels_[l];
    std::size_t begin = child * fanout_;
    std::size_t end = l + 1 == levels_.size() ? level.size() : std::min(level.size(), begin + fanout_);
    if (l + 1 == levels_.size()) begin = 0;
    auto it = std::upper_bound(level.begin() + static_cast<std::ptrdiff_t>(begin),
                               level.begin() + static_cast<std::ptrdiff_t>(end), key);
    child = it == level.begin() + static_cast<std::ptrdiff_t>(begin)
                ? begin
                : static_cast<std::size_t>(it - level.begin()) - 1;
  }
  auto lo = static_cast<Position>(child * page_size_);
  auto hi = std::min<Position>(last, lo + static_cast<Position>(page_size_) - 1);
  return {lo + (hi - lo) / 2, lo, hi};
}

}  // namespace gapidx
