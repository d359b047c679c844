#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapidx/dataset.hpp"
#include "gapidx/index.hpp"

namespace gapidx {

/// Cached key of empty slots with no occupied slot to their right. Not a valid key.
inline constexpr Key kEmptyTailKey = std::numeric_limits<Key>::max();

struct Entry {
  Key key = 0;
  Payload payload = 0;
  friend bool operator==(const Entry&, const Entry&) = default;
};

enum class InsertOutcome { placed_in_slot, linked, duplicate };

struct InsertReport {
  InsertOutcome outcome = InsertOutcome::duplicate;
  std::size_t slot = 0;  // slot taken, or the slot whose linking array got the key
};

/// Slot array G plus linking arrays. Every slot holds a key: the stored key
/// when occupied, otherwise the key of the next occupied slot to the right
/// (kEmptyTailKey past the last one), so the key column is non-decreasing and
/// can be searched directly. A linking array A_i is kept only for occupied
/// slots that collided; G(i) holds min(A_i) and `overflow` holds the rest.
class GappedArray {
 public:
  GappedArray() = default;
  explicit GappedArray(std::size_t slots);

  /// Places entries (strictly increasing keys) in order: each key takes the
  /// slot hint(key) when it lies right of the last occupied slot, otherwise
  /// it joins that slot's linking array.
  template <typename Hint>
  static GappedArray build(std::span<const Entry> entries, std::size_t slots, Hint hint);

  std::optional<Payload> find(Key key, Position hint) const noexcept;
  /// Slot whose key or linking array holds `key`.
  std::optional<std::size_t> slot_of(Key key, Position hint) const noexcept;
  InsertReport insert(Key key, Payload payload, Position hint);
  bool erase(Key key, Position hint);
  bool update(Key key, Payload payload, Position hint);

  std::size_t size() const noexcept { return keys_.size(); }
  std::size_t key_count() const noexcept { return key_count_; }
  std::size_t occupied_count() const noexcept { return occupied_count_; }
  std::size_t linked_count() const noexcept { return links_.size(); }
  double gap_fraction() const noexcept;

  bool occupied(std::size_t slot) const noexcept { return occupied_[slot] != 0; }
  Key slot_key(std::size_t slot) const noexcept { return keys_[slot]; }
  Payload slot_payload(std::size_t slot) const noexcept { return payloads_[slot]; }
  /// Entries after G(slot) in A_slot, empty if the slot has no linking array.
  std::span<const Entry> overflow(std::size_t slot) const noexcept;
  const std::map<std::size_t, std::vector<Entry>>& links() const noexcept { return links_; }

  /// All stored entries in key order, each with the slot it lives at.
  std::vector<std::pair<Entry, std::size_t>> entries() const;

  /// First broken invariant, or nullopt when the structure is consistent.
  std::optional<std::string> audit() const;

  friend bool operator==(const GappedArray&, const GappedArray&) = default;

  // Serialization hooks.
  static GappedArray from_parts(std::vector<Key> keys, std::vector<Payload> payloads,
                                std::vector<std::uint8_t> occupied, std::map<std::size_t, std::vector<Entry>> links);
  std::span<const Key> key_column() const noexcept { return keys_; }
  std::span<const Payload> payload_column() const noexcept { return payloads_; }

 private:
  /// First slot in [0, size] whose key exceeds `key`, searched outward from `hint`.
  std::size_t upper_slot(Key key, Position hint) const noexcept;
  void occupy(std::size_t slot, Key key, Payload payload);
  void refill_left(std::size_t slot, Key cached);
  Key right_key(std::size_t slot) const noexcept;
  void fill_cached_keys();

  std::vector<Key> keys_;
  std::vector<Payload> payloads_;
  std::vector<std::uint8_t> occupied_;
  std::map<std::size_t, std::vector<Entry>> links_;
  std::size_t key_count_ = 0;
  std::size_t occupied_count_ = 0;
};

template <typename Hint>
GappedArray GappedArray::build(std::span<const Entry> entries, std::size_t slots, Hint hint) {
  GappedArray g(std::max<std::size_t>(slots, 1));
  const auto limit = static_cast<Position>(g.size());
  Position last = -1;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.key == kEmptyTailKey) throw std::invalid_argument("key 2^64-1 is reserved");
    if (i > 0 && entries[i - 1].key >= e.key) throw std::invalid_argument("entries must have strictly increasing keys");
    Position p = std::clamp<Position>(hint(e.key), 0, limit - 1);
    if (p > last) {
      g.keys_[static_cast<std::size_t>(p)] = e.key;
      g.payloads_[static_cast<std::size_t>(p)] = e.payload;
      g.occupied_[static_cast<std::size_t>(p)] = 1;
      ++g.occupied_count_;
      last = p;
    } else {
      g.links_[static_cast<std::size_t>(last)].push_back(e);
    }
    ++g.key_count_;
  }
  g.fill_cached_keys();
  return g;
}

/// Predicted slot of `key` under `model`, clamped to the array.
Position predicted_slot(const AnyIndex& model, const GappedArray& g, Key key) noexcept;

/// Builds with `model` as the placement function.
GappedArray build_gapped(const AnyIndex& model, std::span<const Entry> entries, std::size_t slots);

std::optional<Payload> lookup(const GappedArray& g, const AnyIndex& model, Key key);
InsertReport insert(GappedArray& g, const AnyIndex& model, Key key, Payload payload);
bool erase(GappedArray& g, const AnyIndex& model, Key key);
bool update(GappedArray& g, const AnyIndex& model, Key key, Payload payload);

/// Binary image: "GDXGAPS1", version, slot count, occupancy bit vector, key
/// column, payload column, then (slot, |A|, entries of A) per linking array.
std::vector<std::uint8_t> encode_gapped(const GappedArray& g);
/// Throws DataError on a malformed or inconsistent image.
GappedArray decode_gapped(std::span<const std::uint8_t> bytes);

}  // namespace gapidx
