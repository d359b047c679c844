#include "gapidx/sampling.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "gapidx/kernels.hpp"
#include "gapidx/rng.hpp"

namespace gapidx {

namespace {

// Floyd's algorithm over a bitmap; returns indices in ascending order.
std::vector<std::size_t> floyd_sorted(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::uint64_t> bits((n + 63) / 64, 0);
  auto test_set = [&](std::size_t i) {
    auto& w = bits[i / 64];
    auto m = std::uint64_t{1} << (i % 64);
    bool was = (w & m) != 0;
    w |= m;
    return was;
  };
  for (std::size_t j = n - count; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> d(0, j);
    if (test_set(d(rng))) test_set(j);
  }
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t w = 0; w < bits.size(); ++w) {
    for (auto word = bits[w]; word != 0; word &= word - 1)
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
  }
  return out;
}

}  // namespace

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (count > n) throw std::invalid_argument("sample larger than population");
  std::mt19937_64 rng(seed);
  return floyd_sorted(n, count, rng);
}

SampledPairs sample_uniform(const Dataset& dataset, const SampleSpec& spec) {
  if (!(spec.rate > 0.0 && spec.rate <= 1.0)) throw std::invalid_argument("sample rate must be in (0, 1]");
  const std::size_t n = dataset.size();
  if (n < 2) throw std::invalid_argument("dataset too small to sample (need n >= 2)");
  std::size_t m = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(spec.rate * static_cast<double>(n))));
  m = std::min(m, n);

  SampledPairs out;
  out.source_n = n;
  out.pairs.reserve(m);
  if (m == n) {
    out.pairs = dataset.pairs();
    return out;
  }
  // Interior ranks 1..n-2; the two extremes are always kept.
  std::mt19937_64 rng(spec.seed);
  auto interior = floyd_sorted(n - 2, m - 2, rng);
  out.pairs.push_back({dataset[0], 0});
  for (auto i : interior) out.pairs.push_back({dataset[i + 1], static_cast<Position>(i + 1)});
  out.pairs.push_back({dataset[n - 1], static_cast<Position>(n - 1)});
  return out;
}

SegmentIndex patch_connect_segments(const SegmentIndex& index, Key min_key, Key max_key) {
  auto segs = index.segments();
  std::vector<LinearSegment> out;
  out.reserve(segs.size() * 2);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    LinearSegment s = segs[i];
    if (i == 0 && min_key < s.first_key) {
      s.intercept = s.eval(min_key);
      s.first_key = min_key;
    }
    if (i + 1 == segs.size() && max_key > s.last_key) s.last_key = max_key;
    out.push_back(s);
    if (i + 1 == segs.size()) break;
    const auto& right = segs[i + 1];
    if (right.first_key - s.last_key <= 1) continue;
    LinearSegment c;
    c.first_key = s.last_key + 1;
    c.last_key = right.first_key - 1;
    c.first_pos = s.last_pos;
    c.last_pos = right.first_pos;
    c.slope = static_cast<double>(right.first_pos - s.last_pos) /
              static_cast<double>(right.first_key - s.last_key);
    c.intercept = static_cast<double>(s.last_pos) + c.slope;
    out.push_back(c);
  }
  SegmentIndex patched(std::move(out), index.epsilon(), index.algorithm(), index.position_limit());
  patched.set_exact_bounds(index.exact_bounds());
  return patched;
}

RmiIndex patch_rmi_nearest_seg(const RmiIndex& index) {
  auto leaves = std::vector<RmiLeaf>(index.leaves().begin(), index.leaves().end());
  const auto n = leaves.size();
  // Nearest trained leaf to the left and right of every id.
  std::vector<std::ptrdiff_t> left(n, -1), right(n, -1);
  for (std::size_t i = 0, last = 0; i < n; ++i) {
    if (leaves[i].trained) last = i + 1;
    left[i] = static_cast<std::ptrdiff_t>(last) - 1;
  }
  for (std::size_t i = n, last = 0; i-- > 0;) {
    if (leaves[i].trained) last = i + 1;
    right[i] = static_cast<std::ptrdiff_t>(last) - 1;
  }
  if (n > 0 && left[n - 1] < 0) throw std::invalid_argument("rmi has no trained leaf");
  for (std::size_t i = 0; i < n; ++i) {
    if (leaves[i].trained) continue;
    auto id = static_cast<std::ptrdiff_t>(i);
    std::ptrdiff_t src;
    if (left[i] < 0)
      src = right[i];
    else if (right[i] < 0)
      src = left[i];
    else
      src = (id - left[i] <= right[i] - id) ? left[i] : right[i];
    auto& from = leaves[static_cast<std::size_t>(src)];
    leaves[i].model = from.model;
    leaves[i].max_positive_error = from.max_positive_error;
    leaves[i].min_negative_error = from.min_negative_error;
  }
  RmiIndex patched(index.root(), std::move(leaves), index.position_limit());
  patched.set_exact_bounds(index.exact_bounds());
  return patched;
}

std::size_t guideline_sample_size(double alpha, std::int64_t max_error, double c, std::size_t n_min) {
  if (max_error < 1) throw std::invalid_argument("max error must be >= 1");
  if (!(c > 0)) throw std::invalid_argument("calibration constant must be positive");
  const double l = std::log2(static_cast<double>(max_error));
  const double raw = std::ceil(c * alpha * alpha * l * l);
  return std::max(n_min, static_cast<std::size_t>(raw));
}

LearnMethod parse_learn_method(std::string_view s) {
  if (s == "greedy" || s == "greedy-cone") return LearnMethod::greedy;
  if (s == "optimal" || s == "pgm") return LearnMethod::optimal;
  if (s == "rmi") return LearnMethod::rmi;
  throw std::invalid_argument("unknown learned method: " + std::string(s));
}

std::string_view to_string(LearnMethod m) {
  switch (m) {
    case LearnMethod::greedy: return "greedy";
    case LearnMethod::optimal: return "optimal";
    case LearnMethod::rmi: return "rmi";
  }
  return "?";
}

AnyIndex fit_method(LearnMethod method, std::span<const KeyPositionPair> pairs, const LearnParams& params,
                    Position position_limit) {
  switch (method) {
    case LearnMethod::greedy: return fit_greedy_cone(pairs, params.epsilon, position_limit);
    case LearnMethod::optimal: return fit_optimal_pla(pairs, params.epsilon, position_limit);
    case LearnMethod::rmi: return fit_rmi(pairs, params.leaf_count, position_limit);
  }
  throw std::invalid_argument("unhandled method");
}

SampledBuild learn_with_sampling(const Dataset& dataset, const SampleSpec& spec, LearnMethod method,
                                 const LearnParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto limit = static_cast<Position>(dataset.size());
  SampledBuild b;
  if (dataset.size() == 1) {
    auto pairs = dataset.pairs();
    b.index = fit_method(method, pairs, params, limit);
    b.sample_size = 1;
  } else {
    auto sample = sample_uniform(dataset, spec);
    b.sample_size = sample.pairs.size();
    b.index = fit_method(method, sample.pairs, params, limit);
    if (b.sample_size < dataset.size()) {
      if (auto* s = std::get_if<SegmentIndex>(&b.index)) {
        b.fitted_model_count = s->segment_count();
        auto patched = patch_connect_segments(*s, dataset.min_key(), dataset.max_key());
        patched.set_exact_bounds(false);
        b.index = std::move(patched);
      } else if (auto* r = std::get_if<RmiIndex>(&b.index)) {
        b.fitted_model_count = r->leaf_count() - r->untrained_count();
        auto patched = patch_rmi_nearest_seg(*r);
        patched.set_exact_bounds(false);
        b.index = std::move(patched);
      }
    }
  }
  b.build_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
  if (b.fitted_model_count == 0) b.fitted_model_count = model_count(b.index);
  return b;
}

BoundCheckReport check_hoeffding_bound(const Dataset& dataset, const AnyIndex& index, std::size_t sample_size,
                                       double delta, std::size_t trials, std::uint64_t seed) {
  if (sample_size == 0 || sample_size > dataset.size()) throw std::invalid_argument("need 1 <= n_s <= n");
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must be in (0, 1)");

  const std::size_t n = dataset.size();
  std::vector<double> cost(n);
  std::visit(
      [&](const auto& m) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
          cost[static_cast<std::size_t>(i)] = kernels::log2_cost(m.predict(dataset[static_cast<std::size_t>(i)]).value - i);
      },
      index);

  BoundCheckReport rep;
  rep.trials = trials;
  rep.delta = delta;
  rep.sample_size = sample_size;
  rep.max_error = max_abs_error(index, dataset.pairs());
  double total = 0;
  for (double c : cost) total += c;
  rep.full_loss = total / static_cast<double>(n);
  const double range = rep.max_error > 1 ? std::log2(static_cast<double>(rep.max_error)) : 0.0;
  rep.bound = range / std::sqrt(2.0 * static_cast<double>(sample_size)) * std::sqrt(std::log(2.0 / delta));
  rep.deviations.assign(trials, 0.0);
  rep.bound_values.assign(trials, rep.bound);

  std::size_t violations = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : violations)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
    std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(t)));
    auto idx = floyd_sorted(n, sample_size, rng);
    double s = 0;
    for (auto i : idx) s += cost[i];
    double dev = std::abs(s / static_cast<double>(sample_size) - rep.full_loss);
    rep.deviations[static_cast<std::size_t>(t)] = dev;
    // Summation-order noise is not a violation.
    if (dev > rep.bound + 1e-9 * std::max(1.0, rep.full_loss)) ++violations;
  }
  rep.violations = violations;
  return rep;
}

}  // namespace gapidx
