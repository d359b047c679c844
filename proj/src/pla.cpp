#include "gapidx/pla.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace gapidx {

namespace {

using i128 = __int128;

void check_input(std::span<const KeyPositionPair> pairs, std::int64_t epsilon) {
  if (pairs.empty()) throw std::invalid_argument("cannot fit an empty pair sequence");
  if (epsilon < 0) throw std::invalid_argument("epsilon must be non-negative");
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i].key <= pairs[i - 1].key)
      throw std::invalid_argument("pairs must be strictly ascending by key");
}

Position resolve_limit(std::span<const KeyPositionPair> pairs, Position position_limit) {
  Position needed = pairs.back().position + 1;
  for (const auto& p : pairs) needed = std::max(needed, p.position + 1);
  return position_limit > 0 ? std::max(position_limit, needed) : needed;
}

// Exact rational with positive denominator.
struct Ratio {
  i128 num;
  i128 den;
};

bool less(const Ratio& a, const Ratio& b) { return a.num * b.den < b.num * a.den; }

long double as_real(const Ratio& r) {
  return static_cast<long double>(r.num) / static_cast<long double>(r.den);
}

// ---------------------------------------------------------------------------
// Shrinking cone.

class ConeBuilder {
 public:
  explicit ConeBuilder(std::int64_t eps) : eps_(eps) {}

  // Returns false (and leaves state untouched) when the point does not fit.
  bool add(const KeyPositionPair& p) {
    if (count_ == 0) {
      origin_ = p;
      last_ = p;
      count_ = 1;
      return true;
    }
    i128 dx = static_cast<i128>(p.key) - static_cast<i128>(origin_.key);
    i128 dy = static_cast<i128>(p.position) - origin_.position;
    Ratio lo{dy - eps_, dx};
    Ratio hi{dy + eps_, dx};
    Ratio new_lo = (count_ == 1 || less(lo_, lo)) ? lo : lo_;
    Ratio new_hi = (count_ == 1 || less(hi, hi_)) ? hi : hi_;
    if (less(new_hi, new_lo)) return false;
    lo_ = new_lo;
    hi_ = new_hi;
    last_ = p;
    ++count_;
    return true;
  }

  LinearSegment segment() const {
    LinearSegment s;
    s.first_key = origin_.key;
    s.last_key = last_.key;
    s.first_pos = origin_.position;
    s.last_pos = last_.position;
    s.intercept = static_cast<double>(origin_.position);
    s.slope = count_ < 2 ? 0.0 : static_cast<double>((as_real(lo_) + as_real(hi_)) / 2);
    return s;
  }

  void reset() { count_ = 0; }

 private:
  std::int64_t eps_;
  KeyPositionPair origin_{};
  KeyPositionPair last_{};
  Ratio lo_{0, 1};
  Ratio hi_{0, 1};
  std::size_t count_ = 0;
};

// ---------------------------------------------------------------------------
// Optimal segmentation. Keeps the convex hulls of the upper (y + eps) and lower
// (y - eps) constraint points together with the two extreme feasible lines
// (min slope: rect[0] -> rect[2], max slope: rect[1] -> rect[3]). A point is
// rejected exactly when no line stabs all the vertical error bars, so every
// segment is extended as far as possible, which minimises the segment count.

class HullBuilder {
 public:
  explicit HullBuilder(std::int64_t eps) : eps_(eps) {}

  bool add(const KeyPositionPair& p) {
    if (count_ == 0) {
      first_ = p;
      last_ = p;
    }
    const i128 x = static_cast<i128>(p.key) - static_cast<i128>(first_.key);
    const Pt up{x, static_cast<i128>(p.position) + eps_};
    const Pt lo{x, static_cast<i128>(p.position) - eps_};

    if (count_ == 0) {
      rect_[0] = up;
      rect_[1] = lo;
      upper_.assign(1, up);
      lower_.assign(1, lo);
      upper_start_ = lower_start_ = 0;
      count_ = 1;
      return true;
    }
    if (count_ == 1) {
      rect_[2] = lo;
      rect_[3] = up;
      upper_.push_back(up);
      lower_.push_back(lo);
      last_ = p;
      count_ = 2;
      return true;
    }

    const Slope min_line = rect_[2] - rect_[0];
    const Slope max_line = rect_[3] - rect_[1];
    if ((up - rect_[2]) < min_line || max_line < (lo - rect_[3])) return false;

    if ((up - rect_[1]) < max_line) {
      // Tighten the max-slope line: pivot on the lower hull point that gives
      // the smallest slope towards the new upper point.
      Slope best = lower_[lower_start_] - up;
      std::size_t best_i = lower_start_;
      for (std::size_t i = lower_start_ + 1; i < lower_.size(); ++i) {
        Slope v = lower_[i] - up;
        if (best < v) break;
        best = v;
        best_i = i;
      }
      rect_[1] = lower_[best_i];
      rect_[3] = up;
      lower_start_ = best_i;

      std::size_t end = upper_.size();
      while (end >= upper_start_ + 2 && cross(upper_[end - 2], upper_[end - 1], up) <= 0) --end;
      upper_.resize(end);
      upper_.push_back(up);
    }

    if (min_line < (lo - rect_[0])) {
      Slope best = upper_[upper_start_] - lo;
      std::size_t best_i = upper_start_;
      for (std::size_t i = upper_start_ + 1; i < upper_.size(); ++i) {
        Slope v = upper_[i] - lo;
        if (v < best) break;
        best = v;
        best_i = i;
      }
      rect_[0] = upper_[best_i];
      rect_[2] = lo;
      upper_start_ = best_i;

      std::size_t end = lower_.size();
      while (end >= lower_start_ + 2 && cross(lower_[end - 2], lower_[end - 1], lo) >= 0) --end;
      lower_.resize(end);
      lower_.push_back(lo);
    }

    last_ = p;
    ++count_;
    return true;
  }

  LinearSegment segment() const {
    LinearSegment s;
    s.first_key = first_.key;
    s.last_key = last_.key;
    s.first_pos = first_.position;
    s.last_pos = last_.position;
    if (count_ == 1) {
      s.slope = 0.0;
      s.intercept = static_cast<double>(first_.position);
      return s;
    }
    const Pt& p0 = rect_[0];
    const Pt& p1 = rect_[1];
    const Pt& p2 = rect_[2];
    const Pt& p3 = rect_[3];
    const Slope s1 = p2 - p0;
    const Slope s2 = p3 - p1;
    const long double min_slope = static_cast<long double>(s1.dy) / static_cast<long double>(s1.dx);
    const long double max_slope = static_cast<long double>(s2.dy) / static_cast<long double>(s2.dx);

    // Both extreme lines are feasible, so is their average; it passes through
    // their intersection (or lies on the shared slope when parallel).
    long double ix = static_cast<long double>(p0.x);
    long double iy = static_cast<long double>(p0.y);
    const i128 det = s1.dx * s2.dy - s1.dy * s2.dx;
    long double slope = (min_slope + max_slope) / 2;
    long double intercept;
    if (det != 0) {
      const i128 num = (p1.x - p0.x) * s2.dy - (p1.y - p0.y) * s2.dx;
      const long double t = static_cast<long double>(num) / static_cast<long double>(det);
      ix = static_cast<long double>(p0.x) + t * static_cast<long double>(s1.dx);
      iy = static_cast<long double>(p0.y) + t * static_cast<long double>(s1.dy);
      intercept = iy - ix * slope;
    } else {
      // Parallel extreme lines: take the centre line between them.
      const long double b0 = static_cast<long double>(p0.y) - min_slope * static_cast<long double>(p0.x);
      const long double b1 = static_cast<long double>(p1.y) - min_slope * static_cast<long double>(p1.x);
      intercept = (b0 + b1) / 2;
    }
    s.slope = static_cast<double>(slope);
    s.intercept = static_cast<double>(intercept);
    return s;
  }

  void reset() { count_ = 0; }

 private:
  struct Slope {
    i128 dx;
    i128 dy;
    // dx > 0 for all slopes compared here.
    friend bool operator<(const Slope& a, const Slope& b) { return a.dy * b.dx < b.dy * a.dx; }
  };
  struct Pt {
    i128 x;
    i128 y;
    Slope operator-(const Pt& o) const { return {x - o.x, y - o.y}; }
  };

  static i128 cross(const Pt& o, const Pt& a, const Pt& b) {
    Slope oa = a - o;
    Slope ob = b - o;
    return oa.dx * ob.dy - oa.dy * ob.dx;
  }

  std::int64_t eps_;
  KeyPositionPair first_{};
  KeyPositionPair last_{};
  Pt rect_[4]{};
  std::vector<Pt> upper_;
  std::vector<Pt> lower_;
  std::size_t upper_start_ = 0;
  std::size_t lower_start_ = 0;
  std::size_t count_ = 0;
};

template <typename Builder>
std::vector<LinearSegment> segment_all(std::span<const KeyPositionPair> pairs, std::int64_t eps) {
  std::vector<LinearSegment> out;
  Builder b(eps);
  for (const auto& p : pairs) {
    if (!b.add(p)) {
      out.push_back(b.segment());
      b.reset();
      b.add(p);
    }
  }
  out.push_back(b.segment());
  return out;
}

}  // namespace

std::string_view to_string(PlaAlgorithm a) {
  return a == PlaAlgorithm::greedy_cone ? "greedy" : "optimal";
}

SegmentIndex::SegmentIndex(std::vector<LinearSegment> segments, std::int64_t epsilon,
                           PlaAlgorithm algorithm, Position position_limit)
    : segments_(std::move(segments)), epsilon_(epsilon), algorithm_(algorithm), limit_(position_limit) {
  if (segments_.empty()) throw std::invalid_argument("segment index needs at least one segment");
  if (limit_ < 1) throw std::invalid_argument("position limit must be positive");
  first_keys_.reserve(segments_.size());
  for (const auto& s : segments_) {
    if (!first_keys_.empty() && s.first_key <= first_keys_.back())
      throw std::invalid_argument("segments must be ascending by first key");
    first_keys_.push_back(s.first_key);
  }
}

std::size_t SegmentIndex::find_segment(Key key) const noexcept {
  auto it = std::upper_bound(first_keys_.begin(), first_keys_.end(), key);
  return it == first_keys_.begin() ? 0 : static_cast<std::size_t>(it - first_keys_.begin()) - 1;
}

SegmentIndex fit_greedy_cone(std::span<const KeyPositionPair> pairs, std::int64_t epsilon,
                             Position position_limit) {
  check_input(pairs, epsilon);
  return SegmentIndex(segment_all<ConeBuilder>(pairs, epsilon), epsilon, PlaAlgorithm::greedy_cone,
                      resolve_limit(pairs, position_limit));
}

SegmentIndex fit_optimal_pla(std::span<const KeyPositionPair> pairs, std::int64_t epsilon,
                             Position position_limit) {
  check_input(pairs, epsilon);
  return SegmentIndex(segment_all<HullBuilder>(pairs, epsilon), epsilon, PlaAlgorithm::optimal,
                      resolve_limit(pairs, position_limit));
}

SegmentIndex fit_segments(PlaAlgorithm algorithm, std::span<const KeyPositionPair> pairs,
                          std::int64_t epsilon, Position position_limit) {
  return algorithm == PlaAlgorithm::greedy_cone ? fit_greedy_cone(pairs, epsilon, position_limit)
                                                : fit_optimal_pla(pairs, epsilon, position_limit);
}

}  // namespace gapidx
