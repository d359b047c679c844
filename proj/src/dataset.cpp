#include "gapidx/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "gapidx/bytes.hpp"

namespace gapidx {

namespace {

constexpr std::string_view kMagic = "GDXKEYS1";

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<Key> parse_csv(std::string_view text, double scale) {
  std::vector<Key> keys;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (scale == 1.0) {
      Key v = 0;
      auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
      if (ec != std::errc{} || ptr != line.data() + line.size())
        throw DataError("malformed key on line " + std::to_string(line_no));
      keys.push_back(v);
    } else {
      std::string owned(line);
      char* end = nullptr;
      double v = std::strtod(owned.c_str(), &end);
      if (end != owned.c_str() + owned.size() || !std::isfinite(v))
        throw DataError("malformed key on line " + std::to_string(line_no));
      double scaled = std::round(v * scale);
      if (scaled < 0 || scaled >= 18446744073709551616.0)
        throw DataError("scaled key out of range on line " + std::to_string(line_no));
      keys.push_back(static_cast<Key>(scaled));
    }
  }
  return keys;
}

}  // namespace

bool is_strictly_increasing(std::span<const Key> keys) noexcept {
  return std::adjacent_find(keys.begin(), keys.end(), std::greater_equal<>{}) == keys.end();
}

Dataset::Dataset(std::vector<Key> keys) : keys_(std::move(keys)) {
  if (!is_strictly_increasing(keys_)) throw DataError("dataset keys must be strictly increasing");
}

Dataset Dataset::from_unsorted(std::vector<Key> keys, std::size_t* duplicates_removed) {
  std::sort(keys.begin(), keys.end());
  auto before = keys.size();
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  if (duplicates_removed) *duplicates_removed = before - keys.size();
  return Dataset(std::move(keys));
}

std::vector<KeyPositionPair> Dataset::pairs() const {
  std::vector<KeyPositionPair> out(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) out[i] = {keys_[i], static_cast<Position>(i)};
  return out;
}

std::optional<Position> Dataset::rank_of(Key key) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return std::nullopt;
  return static_cast<Position>(it - keys_.begin());
}

std::vector<std::uint8_t> encode_dataset(const Dataset& dataset) {
  bytes::Writer w;
  w.magic(kMagic);
  w.u64(dataset.size());
  for (Key k : dataset.keys()) w.u64(k);
  return std::move(w).take();
}

Dataset decode_dataset(std::span<const std::uint8_t> data) {
  try {
    bytes::Reader r(data);
    if (!r.magic(kMagic)) throw DataError("bad dataset magic");
    auto n = r.u64();
    if (n > r.remaining() / 8) throw DataError("dataset count exceeds file size");
    std::vector<Key> keys(n);
    for (auto& k : keys) k = r.u64();
    if (r.remaining() != 0) throw DataError("trailing bytes after dataset");
    return Dataset(std::move(keys));
  } catch (const std::out_of_range&) {
    throw DataError("truncated dataset file");
  }
}

LoadResult load_dataset(const std::filesystem::path& path, DatasetFormat format, double csv_scale) {
  auto raw = read_file(path);
  if (raw.empty()) throw DataError("empty input: " + path.string());
  LoadResult result;
  if (format == DatasetFormat::binary) {
    // Binary files are written sorted; tolerate unsorted producers anyway.
    try {
      result.dataset = decode_dataset(raw);
    } catch (const DataError&) {
      bytes::Reader r(raw);
      if (!r.magic(kMagic)) throw;
      auto n = r.u64();
      if (n > r.remaining() / 8 || r.remaining() != n * 8) throw;
      std::vector<Key> keys(n);
      for (auto& k : keys) k = r.u64();
      result.dataset = Dataset::from_unsorted(std::move(keys), &result.duplicates_removed);
    }
  } else {
    std::string_view text(reinterpret_cast<const char*>(raw.data()), raw.size());
    auto keys = parse_csv(text, csv_scale);
    result.dataset = Dataset::from_unsorted(std::move(keys), &result.duplicates_removed);
    result.dataset.scale = csv_scale;
  }
  if (result.dataset.empty()) throw DataError("empty input: " + path.string());
  return result;
}

LoadResult load_dataset_auto(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  char head[8] = {};
  in.read(head, sizeof head);
  bool binary = in.gcount() == 8 && std::string_view(head, 8) == kMagic;
  return load_dataset(path, binary ? DatasetFormat::binary : DatasetFormat::csv);
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path, DatasetFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  if (format == DatasetFormat::binary) {
    auto buf = encode_dataset(dataset);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  } else {
    for (Key k : dataset.keys()) out << k << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::optional<MonotonicViolation> validate_monotonic(std::span<const KeyPositionPair> pairs) {
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pairs[a].key < pairs[b].key; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& prev = pairs[order[i - 1]];
    const auto& cur = pairs[order[i]];
    auto lo = std::min(order[i - 1], order[i]);
    auto hi = std::max(order[i - 1], order[i]);
    if (prev.key == cur.key) return MonotonicViolation{MonotonicViolation::Kind::duplicate_key, lo, hi};
    if (prev.position >= cur.position) return MonotonicViolation{MonotonicViolation::Kind::order, lo, hi};
  }
  return std::nullopt;
}

}  // namespace gapidx
