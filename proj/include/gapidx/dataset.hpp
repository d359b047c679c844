#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gapidx {

using Key = std::uint64_t;
using Position = std::int64_t;
using Payload = std::uint64_t;

/// Raised for unreadable, malformed or otherwise unusable input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeyPositionPair {
  Key key = 0;
  Position position = 0;

  friend bool operator==(const KeyPositionPair&, const KeyPositionPair&) = default;
};

/// Sorted, duplicate-free key array. The key at rank i has position i.
class Dataset {
 public:
  Dataset() = default;

  /// Takes ownership of keys that must already be strictly increasing.
  /// Throws DataError otherwise.
  explicit Dataset(std::vector<Key> keys);

  /// Sorts and removes duplicates; the number of dropped keys is written to
  /// `duplicates_removed` when non-null.
  static Dataset from_unsorted(std::vector<Key> keys, std::size_t* duplicates_removed = nullptr);

  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }
  std::span<const Key> keys() const noexcept { return keys_; }
  Key operator[](std::size_t i) const noexcept { return keys_[i]; }
  Key min_key() const { return keys_.front(); }
  Key max_key() const { return keys_.back(); }

  /// All (key, rank) pairs.
  std::vector<KeyPositionPair> pairs() const;

  /// Rank of `key`, if present.
  std::optional<Position> rank_of(Key key) const;

  /// Fixed-point scale recorded for fractional inputs (1 when keys were integers).
  double scale = 1.0;

  friend bool operator==(const Dataset& a, const Dataset& b) { return a.keys_ == b.keys_; }

 private:
  std::vector<Key> keys_;
};

enum class DatasetFormat { binary, csv };

struct LoadResult {
  Dataset dataset;
  std::size_t duplicates_removed = 0;
};

/// Loads keys from disk. CSV accepts one decimal key per line in any order;
/// with `csv_scale` != 1 each value is parsed as a real number and multiplied
/// before rounding (fractional coordinates). Throws DataError.
LoadResult load_dataset(const std::filesystem::path& path, DatasetFormat format, double csv_scale = 1.0);

/// Picks the format from the file's leading magic bytes.
LoadResult load_dataset_auto(const std::filesystem::path& path);

void save_dataset(const Dataset& dataset, const std::filesystem::path& path,
                  DatasetFormat format = DatasetFormat::binary);

/// Binary layout: "GDXKEYS1", u64 count, then count u64 keys (all little-endian).
std::vector<std::uint8_t> encode_dataset(const Dataset& dataset);
Dataset decode_dataset(std::span<const std::uint8_t> bytes);

struct MonotonicViolation {
  enum class Kind { order, duplicate_key };
  Kind kind;
  std::size_t first;   // pair index
  std::size_t second;  // pair index
};

/// Empty result means the pairs are strictly co-monotone in key and position.
/// A violation names the first offending neighbours in key order, reported as
/// original pair indices with first < second.
std::optional<MonotonicViolation> validate_monotonic(std::span<const KeyPositionPair> pairs);

/// True when keys are strictly increasing.
bool is_strictly_increasing(std::span<const Key> keys) noexcept;

}  // namespace gapidx
