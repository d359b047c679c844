#include "gapidx/serialize.hpp"

#include <fstream>
#include <iterator>
#include <stdexcept>

#include "gapidx/bytes.hpp"

namespace gapidx {

namespace {

constexpr std::string_view kMagic = "GDXINDEX";
constexpr std::uint32_t kVersion = 1;

enum class Tag : std::uint32_t { segments = 1, rmi = 2, baseline = 3 };

void write(bytes::Writer& w, const SegmentIndex& s) {
  w.i64(s.epsilon());
  w.u32(static_cast<std::uint32_t>(s.algorithm()));
  w.u32(s.exact_bounds() ? 1 : 0);
  w.i64(s.position_limit());
  const auto segs = s.segments();
  w.u64(segs.size());
  for (const auto& g : segs) w.u64(g.first_key);
  for (const auto& g : segs) w.u64(g.last_key);
  for (const auto& g : segs) w.f64(g.slope);
  for (const auto& g : segs) w.f64(g.intercept);
  for (const auto& g : segs) w.i64(g.first_pos);
  for (const auto& g : segs) w.i64(g.last_pos);
}

SegmentIndex read_segments(bytes::Reader& r) {
  auto eps = r.i64();
  auto algo = r.u32();
  auto exact = r.u32();
  auto limit = r.i64();
  auto n = r.u64();
  if (algo != 1 && algo != 2) throw DataError("unknown segment algorithm");
  if (n > r.remaining() / 48) throw DataError("segment count exceeds image size");
  std::vector<LinearSegment> segs(n);
  for (auto& g : segs) g.first_key = r.u64();
  for (auto& g : segs) g.last_key = r.u64();
  for (auto& g : segs) g.slope = r.f64();
  for (auto& g : segs) g.intercept = r.f64();
  for (auto& g : segs) g.first_pos = r.i64();
  for (auto& g : segs) g.last_pos = r.i64();
  SegmentIndex s(std::move(segs), eps, static_cast<PlaAlgorithm>(algo), limit);
  s.set_exact_bounds(exact != 0);
  return s;
}

void write(bytes::Writer& w, const RmiIndex& m) {
  w.i64(m.position_limit());
  w.u32(m.exact_bounds() ? 1 : 0);
  w.u32(0);
  w.u64(m.root().anchor);
  w.f64(m.root().slope);
  w.f64(m.root().intercept);
  const auto leaves = m.leaves();
  w.u64(leaves.size());
  for (const auto& l : leaves) w.u64(l.model.anchor);
  for (const auto& l : leaves) w.f64(l.model.slope);
  for (const auto& l : leaves) w.f64(l.model.intercept);
  for (const auto& l : leaves) w.i64(l.max_positive_error);
  for (const auto& l : leaves) w.i64(l.min_negative_error);
  for (const auto& l : leaves) w.u64(l.routed);
  for (const auto& l : leaves) w.u64(l.trained ? 1 : 0);
}

RmiIndex read_rmi(bytes::Reader& r) {
  auto limit = r.i64();
  auto exact = r.u32();
  r.u32();
  LinearModel root;
  root.anchor = r.u64();
  root.slope = r.f64();
  root.intercept = r.f64();
  auto n = r.u64();
  if (n > r.remaining() / 56) throw DataError("leaf count exceeds image size");
  std::vector<RmiLeaf> leaves(n);
  for (auto& l : leaves) l.model.anchor = r.u64();
  for (auto& l : leaves) l.model.slope = r.f64();
  for (auto& l : leaves) l.model.intercept = r.f64();
  for (auto& l : leaves) l.max_positive_error = r.i64();
  for (auto& l : leaves) l.min_negative_error = r.i64();
  for (auto& l : leaves) l.routed = r.u64();
  for (auto& l : leaves) l.trained = r.u64() != 0;
  RmiIndex m(root, std::move(leaves), limit);
  m.set_exact_bounds(exact != 0);
  return m;
}

void write(bytes::Writer& w, const BaselineIndex& b) {
  w.u32(static_cast<std::uint32_t>(b.kind()));
  w.u32(0);
  w.u64(b.size());
  w.u64(b.page_size());
  w.u64(b.fanout());
  w.u64(b.levels().size());
  for (const auto& level : b.levels()) {
    w.u64(level.size());
    for (Key k : level) w.u64(k);
  }
}

BaselineIndex read_baseline(bytes::Reader& r) {
  auto kind = r.u32();
  r.u32();
  auto n = r.u64();
  auto page = r.u64();
  auto fanout = r.u64();
  auto nlevels = r.u64();
  if (kind != 1 && kind != 2) throw DataError("unknown baseline kind");
  if (nlevels > r.remaining() / 8) throw DataError("level count exceeds image size");
  std::vector<std::vector<Key>> levels(nlevels);
  for (auto& level : levels) {
    auto c = r.u64();
    if (c > r.remaining() / 8) throw DataError("level size exceeds image size");
    level.resize(c);
    for (auto& k : level) k = r.u64();
  }
  return BaselineIndex::from_parts(static_cast<BaselineKind>(kind), n, page, fanout, std::move(levels));
}

}  // namespace

std::vector<std::uint8_t> encode_index(const AnyIndex& index) {
  bytes::Writer w;
  w.magic(kMagic);
  w.u32(kVersion);
  std::visit(
      [&](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, SegmentIndex>)
          w.u32(static_cast<std::uint32_t>(Tag::segments));
        else if constexpr (std::is_same_v<T, RmiIndex>)
          w.u32(static_cast<std::uint32_t>(Tag::rmi));
        else
          w.u32(static_cast<std::uint32_t>(Tag::baseline));
        write(w, i);
      },
      index);
  return std::move(w).take();
}

AnyIndex decode_index(std::span<const std::uint8_t> data) {
  try {
    bytes::Reader r(data);
    if (!r.magic(kMagic)) throw DataError("bad index magic");
    if (r.u32() != kVersion) throw DataError("unsupported index version");
    auto tag = static_cast<Tag>(r.u32());
    AnyIndex out;
    switch (tag) {
      case Tag::segments: out = read_segments(r); break;
      case Tag::rmi: out = read_rmi(r); break;
      case Tag::baseline: out = read_baseline(r); break;
      default: throw DataError("unknown index kind");
    }
    if (r.remaining() != 0) throw DataError("trailing bytes after index");
    return out;
  } catch (const std::out_of_range&) {
    throw DataError("truncated index image");
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("inconsistent index image: ") + e.what());
  }
}

void save_index(const AnyIndex& index, const std::filesystem::path& path) {
  auto buf = encode_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw DataError("cannot write " + path.string());
}

AnyIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::uint8_t> buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return decode_index(buf);
}

std::size_t serialized_size(const AnyIndex& index) { return encode_index(index).size(); }

}  // namespace gapidx
