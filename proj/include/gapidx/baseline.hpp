#pragma once

#include <span>
#include <vector>

#include "gapidx/pla.hpp"

namespace gapidx {

enum class BaselineKind : std::uint32_t { binary_search = 1, btree = 2 };

/// Non-learned comparison points. The B+ tree is a static fixed-fanout tree
/// of separator keys over contiguous leaf pages of the sorted key array;
/// "prediction" is the descent to a page, correction is the page search.
class BaselineIndex {
 public:
  BaselineIndex() = default;

  static BaselineIndex binary_search(std::size_t n);
  static BaselineIndex btree(std::span<const Key> keys, std::size_t page_size, std::size_t fanout);

  PredictedPosition predict(Key key) const noexcept;

  BaselineKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return n_; }
  std::size_t page_size() const noexcept { return page_size_; }
  std::size_t fanout() const noexcept { return fanout_; }
  /// levels()[0] holds the first key of every page; each higher level holds the
  /// first key of every group of `fanout` entries below it.
  const std::vector<std::vector<Key>>& levels() const noexcept { return levels_; }
  std::size_t separator_count() const noexcept;

  static BaselineIndex from_parts(BaselineKind kind, std::size_t n, std::size_t page_size, std::size_t fanout,
                                  std::vector<std::vector<Key>> levels);

  friend bool operator==(const BaselineIndex&, const BaselineIndex&) = default;

 private:
  BaselineKind kind_ = BaselineKind::binary_search;
  std::size_t n_ = 0;
  std::size_t page_size_ = 0;
  std::size_t fanout_ = 0;
  std::vector<std::vector<Key>> levels_;
};

}  // namespace gapidx
