#include "gapidx/gap_plan.hpp"

#include <cmath>
#include <stdexcept>

namespace gapidx {

std::int64_t GapPlan::total_gaps() const noexcept {
  std::int64_t s = 0;
  for (auto u : segment_gaps) s += u;
  return s;
}

std::size_t GapPlan::slot_count() const noexcept {
  if (targets.empty()) return 0;
  return static_cast<std::size_t>(std::ceil(targets.back())) + 1;
}

std::vector<KeyPositionPair> GapPlan::rounded_pairs() const {
  std::vector<KeyPositionPair> out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    out[i] = {keys[i], static_cast<Position>(std::floor(targets[i] + 0.5))};
  return out;
}

GapPlan plan_gaps(const SegmentIndex& segments, std::span<const KeyPositionPair> data, double rho) {
  if (!(rho >= 0) || !std::isfinite(rho)) throw std::invalid_argument("gap ratio must be >= 0");
  if (data.empty()) throw std::invalid_argument("cannot plan gaps for empty data");
  if (segments.segment_count() == 0) throw std::invalid_argument("cannot plan gaps without segments");
  for (std::size_t i = 1; i < data.size(); ++i)
    if (data[i].key <= data[i - 1].key) throw std::invalid_argument("gap planning needs strictly increasing keys");

  GapPlan plan;
  plan.rho = rho;
  plan.keys.reserve(data.size());
  plan.targets.reserve(data.size());

  std::int64_t prefix = 0;
  std::size_t begin = 0;
  while (begin < data.size()) {
    const auto seg = segments.find_segment(data[begin].key);
    std::size_t end = begin + 1;
    while (end < data.size() && segments.find_segment(data[end].key) == seg) ++end;

    const auto& first = data[begin];
    const auto& last = data[end - 1];
    const double span_y = static_cast<double>(last.position - first.position);
    const auto u = static_cast<std::int64_t>(std::llround(rho * span_y));

    GapAnchor a;
    a.first_key = first.key;
    a.last_key = last.key;
    a.first_target = static_cast<double>(first.position + prefix);
    a.last_target = a.first_target + span_y * (1.0 + rho);
    const double dx = key_offset(last.key, first.key);
    // rho == 0 inserts nothing and keeps the original positions.
    for (std::size_t i = begin; i < end; ++i) {
      double t;
      if (rho == 0)
        t = static_cast<double>(data[i].position);
      else if (i + 1 == end)
        t = a.last_target;
      else
        t = a.first_target + key_offset(data[i].key, first.key) * ((a.last_target - a.first_target) / dx);
      plan.keys.push_back(data[i].key);
      plan.targets.push_back(t);
    }
    plan.anchors.push_back(a);
    plan.segment_gaps.push_back(u);
    prefix += u;
    begin = end;
  }
  return plan;
}

}  // namespace gapidx
