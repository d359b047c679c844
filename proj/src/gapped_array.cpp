#include "gapidx/gapped_array.hpp"

#include "gapidx/bytes.hpp"

namespace gapidx {

namespace {

constexpr std::string_view kGapsMagic = "GDXGAPS1";
constexpr std::uint32_t kGapsVersion = 1;

std::vector<Entry>::iterator find_entry(std::vector<Entry>& v, Key key) {
  auto it = std::lower_bound(v.begin(), v.end(), key, [](const Entry& e, Key k) { return e.key < k; });
  return it != v.end() && it->key == key ? it : v.end();
}

}  // namespace

GappedArray::GappedArray(std::size_t slots)
    : keys_(slots, kEmptyTailKey), payloads_(slots, 0), occupied_(slots, 0) {}

std::size_t GappedArray::upper_slot(Key key, Position hint) const noexcept {
  const std::size_t n = keys_.size();
  if (n == 0) return 0;
  const auto h = static_cast<std::size_t>(std::clamp<Position>(hint, 0, static_cast<Position>(n) - 1));
  std::size_t lo, hi;
  if (keys_[h] > key) {
    hi = h;
    lo = 0;
    for (std::size_t step = 1; hi >= step; step *= 2) {
      if (keys_[hi - step] <= key) {
        lo = hi - step + 1;
        break;
      }
      hi -= step;
    }
  } else {
    lo = h + 1;
    hi = n;
    for (std::size_t step = 1; lo - 1 + step < n; step *= 2) {
      std::size_t c = lo - 1 + step;
      if (keys_[c] > key) {
        hi = c;
        break;
      }
      lo = c + 1;
    }
  }
  auto first = keys_.begin();
  return static_cast<std::size_t>(std::upper_bound(first + static_cast<std::ptrdiff_t>(lo),
                                                   first + static_cast<std::ptrdiff_t>(hi), key) -
                                  first);
}

Key GappedArray::right_key(std::size_t slot) const noexcept {
  return slot + 1 < keys_.size() ? keys_[slot + 1] : kEmptyTailKey;
}

void GappedArray::refill_left(std::size_t slot, Key cached) {
  for (std::size_t i = slot; i-- > 0 && !occupied_[i];) keys_[i] = cached;
}

void GappedArray::occupy(std::size_t slot, Key key, Payload payload) {
  keys_[slot] = key;
  payloads_[slot] = payload;
  occupied_[slot] = 1;
  ++occupied_count_;
  refill_left(slot, key);
}

void GappedArray::fill_cached_keys() {
  Key next = kEmptyTailKey;
  for (std::size_t i = keys_.size(); i-- > 0;) {
    if (occupied_[i])
      next = keys_[i];
    else
      keys_[i] = next;
  }
}

std::optional<std::size_t> GappedArray::slot_of(Key key, Position hint) const noexcept {
  const std::size_t j = upper_slot(key, hint);
  if (j == 0) return std::nullopt;
  const std::size_t y = j - 1;
  if (keys_[y] == key) return y;
  auto it = links_.find(y);
  if (it == links_.end()) return std::nullopt;
  for (const auto& e : it->second)
    if (e.key == key) return y;
  return std::nullopt;
}

std::optional<Payload> GappedArray::find(Key key, Position hint) const noexcept {
  const std::size_t j = upper_slot(key, hint);
  if (j == 0) return std::nullopt;
  const std::size_t y = j - 1;
  if (keys_[y] == key) return payloads_[y];
  auto it = links_.find(y);
  if (it == links_.end()) return std::nullopt;
  for (const auto& e : it->second)
    if (e.key == key) return e.payload;
  return std::nullopt;
}

InsertReport GappedArray::insert(Key key, Payload payload, Position hint) {
  if (key == kEmptyTailKey) throw std::invalid_argument("key 2^64-1 is reserved");
  const std::size_t n = keys_.size();
  if (n == 0) throw std::logic_error("insert into a gapped array without slots");
  const std::size_t j = upper_slot(key, hint);
  const bool has_ub = j > 0;
  const std::size_t ub = j - 1;
  auto link = has_ub ? links_.find(ub) : links_.end();
  if (has_ub && keys_[ub] == key) return {InsertOutcome::duplicate, ub};
  if (link != links_.end() && find_entry(link->second, key) != link->second.end())
    return {InsertOutcome::duplicate, ub};

  // The predicted slot is usable when it is empty and sits in the run of
  // empty slots right after y_ub, and nothing linked at y_ub is larger.
  const auto p = static_cast<std::size_t>(std::clamp<Position>(hint, 0, static_cast<Position>(n) - 1));
  const bool run_after_ub = j < n && !occupied_[j];
  const bool fits = run_after_ub && p >= j && !occupied_[p] && keys_[p] == keys_[j] &&
                    (link == links_.end() || link->second.back().key < key);
  if (fits) {
    occupy(p, key, payload);
    ++key_count_;
    return {InsertOutcome::placed_in_slot, p};
  }
  if (has_ub) {
    auto& v = links_[ub];
    auto at = std::upper_bound(v.begin(), v.end(), key, [](Key k, const Entry& e) { return k < e.key; });
    v.insert(at, Entry{key, payload});
    ++key_count_;
    return {InsertOutcome::linked, ub};
  }
  // Smaller than every stored key.
  if (!occupied_[0]) {
    const std::size_t first_occupied = upper_slot(keys_[0], 0) - 1;
    const std::size_t slot = first_occupied - 1;
    occupy(slot, key, payload);
    ++key_count_;
    return {InsertOutcome::placed_in_slot, slot};
  }
  auto& v = links_[0];
  v.insert(v.begin(), Entry{keys_[0], payloads_[0]});
  keys_[0] = key;
  payloads_[0] = payload;
  ++key_count_;
  return {InsertOutcome::linked, 0};
}

bool GappedArray::erase(Key key, Position hint) {
  const std::size_t j = upper_slot(key, hint);
  if (j == 0) return false;
  const std::size_t y = j - 1;
  auto link = links_.find(y);
  if (keys_[y] == key) {
    if (link != links_.end()) {
      auto& v = link->second;
      keys_[y] = v.front().key;
      payloads_[y] = v.front().payload;
      v.erase(v.begin());
      if (v.empty()) links_.erase(link);
      refill_left(y, keys_[y]);
    } else {
      const Key cached = right_key(y);
      occupied_[y] = 0;
      --occupied_count_;
      keys_[y] = cached;
      payloads_[y] = 0;
      refill_left(y, cached);
    }
    --key_count_;
    return true;
  }
  if (link == links_.end()) return false;
  auto& v = link->second;
  auto it = find_entry(v, key);
  if (it == v.end()) return false;
  v.erase(it);
  if (v.empty()) links_.erase(link);
  --key_count_;
  return true;
}

bool GappedArray::update(Key key, Payload payload, Position hint) {
  const std::size_t j = upper_slot(key, hint);
  if (j == 0) return false;
  const std::size_t y = j - 1;
  if (keys_[y] == key) {
    payloads_[y] = payload;
    return true;
  }
  auto link = links_.find(y);
  if (link == links_.end()) return false;
  auto it = find_entry(link->second, key);
  if (it == link->second.end()) return false;
  it->payload = payload;
  return true;
}

double GappedArray::gap_fraction() const noexcept {
  if (keys_.empty()) return 0.0;
  return static_cast<double>(keys_.size() - occupied_count_) / static_cast<double>(keys_.size());
}

std::span<const Entry> GappedArray::overflow(std::size_t slot) const noexcept {
  auto it = links_.find(slot);
  if (it == links_.end()) return {};
  return it->second;
}

std::vector<std::pair<Entry, std::size_t>> GappedArray::entries() const {
  std::vector<std::pair<Entry, std::size_t>> out;
  out.reserve(key_count_);
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (!occupied_[i]) continue;
    out.push_back({Entry{keys_[i], payloads_[i]}, i});
    for (const auto& e : overflow(i)) out.push_back({e, i});
  }
  return out;
}

std::optional<std::string> GappedArray::audit() const {
  const std::size_t n = keys_.size();
  if (payloads_.size() != n || occupied_.size() != n) return "column sizes differ";
  std::size_t occupied = 0;
  std::size_t stored = 0;
  bool seen = false;
  Key prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!occupied_[i]) continue;
    if (keys_[i] == kEmptyTailKey) return "slot " + std::to_string(i) + " stores the reserved key";
    if (seen && keys_[i] <= prev) return "occupied keys not increasing at slot " + std::to_string(i);
    seen = true;
    prev = keys_[i];
    ++occupied;
  }
  Key next = kEmptyTailKey;
  for (std::size_t i = n; i-- > 0;) {
    if (occupied_[i])
      next = keys_[i];
    else if (keys_[i] != next)
      return "empty slot " + std::to_string(i) + " caches a stale key";
  }
  stored = occupied;
  for (const auto& [slot, v] : links_) {
    const std::string where = "linking array at slot " + std::to_string(slot);
    if (slot >= n || !occupied_[slot]) return where + " hangs off an empty slot";
    if (v.empty()) return where + " has a single entry";
    if (v.front().key <= keys_[slot]) return where + ": slot key is not the minimum";
    for (std::size_t k = 1; k < v.size(); ++k)
      if (v[k].key <= v[k - 1].key) return where + " is not sorted";
    if (v.back().key >= right_key(slot)) return where + " overlaps the next occupied key";
    stored += v.size();
  }
  if (occupied != occupied_count_) return "occupied count out of sync";
  if (stored != key_count_) return "key count out of sync";
  return std::nullopt;
}

GappedArray GappedArray::from_parts(std::vector<Key> keys, std::vector<Payload> payloads,
                                    std::vector<std::uint8_t> occupied,
                                    std::map<std::size_t, std::vector<Entry>> links) {
  GappedArray g;
  g.keys_ = std::move(keys);
  g.payloads_ = std::move(payloads);
  g.occupied_ = std::move(occupied);
  g.links_ = std::move(links);
  for (auto o : g.occupied_) g.occupied_count_ += o ? 1 : 0;
  g.key_count_ = g.occupied_count_;
  for (const auto& [slot, v] : g.links_) g.key_count_ += v.size();
  return g;
}

Position predicted_slot(const AnyIndex& model, const GappedArray& g, Key key) noexcept {
  if (g.size() == 0) return 0;
  return std::clamp<Position>(predict(model, key).value, 0, static_cast<Position>(g.size()) - 1);
}

GappedArray build_gapped(const AnyIndex& model, std::span<const Entry> entries, std::size_t slots) {
  return std::visit(
      [&](const auto& m) {
        return GappedArray::build(entries, slots, [&m](Key k) { return m.predict(k).value; });
      },
      model);
}

std::optional<Payload> lookup(const GappedArray& g, const AnyIndex& model, Key key) {
  return g.find(key, predicted_slot(model, g, key));
}

InsertReport insert(GappedArray& g, const AnyIndex& model, Key key, Payload payload) {
  return g.insert(key, payload, predicted_slot(model, g, key));
}

bool erase(GappedArray& g, const AnyIndex& model, Key key) { return g.erase(key, predicted_slot(model, g, key)); }

bool update(GappedArray& g, const AnyIndex& model, Key key, Payload payload) {
  return g.update(key, payload, predicted_slot(model, g, key));
}

std::vector<std::uint8_t> encode_gapped(const GappedArray& g) {
  bytes::Writer w;
  const std::size_t n = g.size();
  w.magic(kGapsMagic);
  w.u32(kGapsVersion);
  w.u32(0);
  w.u64(n);
  for (std::size_t base = 0; base < n; base += 64) {
    std::uint64_t word = 0;
    for (std::size_t b = 0; b < 64 && base + b < n; ++b)
      if (g.occupied(base + b)) word |= std::uint64_t{1} << b;
    w.u64(word);
  }
  for (Key k : g.key_column()) w.u64(k);
  for (Payload p : g.payload_column()) w.u64(p);
  w.u64(g.links().size());
  for (const auto& [slot, v] : g.links()) {
    w.u64(slot);
    w.u64(v.size() + 1);
    w.u64(g.slot_key(slot));
    w.u64(g.slot_payload(slot));
    for (const auto& e : v) {
      w.u64(e.key);
      w.u64(e.payload);
    }
  }
  return std::move(w).take();
}

GappedArray decode_gapped(std::span<const std::uint8_t> in) {
  try {
    bytes::Reader r(in);
    if (!r.magic(kGapsMagic)) throw DataError("not a gapped array image");
    if (r.u32() != kGapsVersion) throw DataError("unsupported gapped array version");
    if (r.u32() != 0) throw DataError("reserved header field is not zero");
    const std::uint64_t n = r.u64();
    // Each slot costs at least 16 bytes, which bounds n before allocating.
    if (n > r.remaining() / 16) throw DataError("slot count exceeds image size");
    std::vector<std::uint8_t> occupied(n, 0);
    for (std::uint64_t base = 0; base < n; base += 64) {
      const std::uint64_t word = r.u64();
      for (std::uint64_t b = 0; b < 64; ++b) {
        const bool bit = (word >> b) & 1;
        if (base + b < n)
          occupied[base + b] = bit ? 1 : 0;
        else if (bit)
          throw DataError("occupancy bits set past the last slot");
      }
    }
    std::vector<Key> keys(n);
    std::vector<Payload> payloads(n);
    for (auto& k : keys) k = r.u64();
    for (auto& p : payloads) p = r.u64();
    const std::uint64_t count = r.u64();
    std::map<std::size_t, std::vector<Entry>> links;
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t slot = r.u64();
      const std::uint64_t len = r.u64();
      if (slot >= n) throw DataError("linking array slot out of range");
      if (len < 2 || len > r.remaining() / 16) throw DataError("bad linking array length");
      if (links.contains(slot)) throw DataError("duplicate linking array slot");
      Entry head{r.u64(), r.u64()};
      if (head.key != keys[slot] || head.payload != payloads[slot])
        throw DataError("linking array head differs from its slot");
      std::vector<Entry> v(len - 1);
      for (auto& e : v) e = Entry{r.u64(), r.u64()};
      links.emplace(slot, std::move(v));
    }
    if (r.remaining() != 0) throw DataError("trailing bytes after gapped array image");
    auto g = GappedArray::from_parts(std::move(keys), std::move(payloads), std::move(occupied), std::move(links));
    if (auto err = g.audit()) throw DataError("inconsistent gapped array image: " + *err);
    return g;
  } catch (const std::out_of_range&) {
    throw DataError("truncated gapped array image");
  }
}

}  // namespace gapidx
