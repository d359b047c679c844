#include "gapidx/synthetic.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace gapidx {

namespace {

constexpr Key kBase = 1'000'000;
constexpr Key kLinearStep = 100;
constexpr Key kMaxPieceStep = 2000;
constexpr Key kStairLow = 1;
constexpr Key kStairHigh = 1000;

// Splits `total` steps into `runs` near-equal runs, longest first.
std::vector<std::size_t> run_lengths(std::size_t total, std::size_t runs) {
  std::vector<std::size_t> out(runs, total / runs);
  for (std::size_t i = 0; i < total % runs; ++i) ++out[i];
  return out;
}

std::vector<Key> keys_from_steps(std::size_t n, Key origin, const std::vector<Key>& run_steps,
                                 const std::vector<std::size_t>& lengths) {
  std::vector<Key> keys;
  keys.reserve(n);
  keys.push_back(origin);
  for (std::size_t r = 0; r < lengths.size(); ++r)
    for (std::size_t i = 0; i < lengths[r]; ++i) keys.push_back(keys.back() + run_steps[r]);
  return keys;
}

Dataset jitter(std::vector<Key> keys, std::uint64_t noise, std::mt19937_64& rng) {
  if (noise > 0) {
    std::uniform_int_distribution<std::int64_t> d(-static_cast<std::int64_t>(noise),
                                                  static_cast<std::int64_t>(noise));
    for (auto& k : keys) k = static_cast<Key>(static_cast<std::int64_t>(k) + d(rng));
  }
  return Dataset::from_unsorted(std::move(keys));
}

}  // namespace

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "linear") return SyntheticKind::linear;
  if (name == "piecewise" || name == "piecewise-linear") return SyntheticKind::piecewise_linear;
  if (name == "lognormal" || name == "lognormal-cdf-like") return SyntheticKind::lognormal;
  if (name == "staircase") return SyntheticKind::staircase;
  throw std::invalid_argument("unknown synthetic kind: " + std::string(name));
}

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::linear: return "linear";
    case SyntheticKind::piecewise_linear: return "piecewise";
    case SyntheticKind::lognormal: return "lognormal";
    case SyntheticKind::staircase: return "staircase";
  }
  return "?";
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("synthetic dataset needs n >= 1");
  std::mt19937_64 rng(spec.seed);
  const Key origin = kBase + spec.noise;

  switch (spec.kind) {
    case SyntheticKind::linear: {
      std::vector<Key> keys(spec.n);
      for (std::size_t i = 0; i < spec.n; ++i) keys[i] = origin + i * kLinearStep;
      return jitter(std::move(keys), spec.noise, rng);
    }
    case SyntheticKind::piecewise_linear:
    case SyntheticKind::staircase: {
      const std::size_t steps = spec.n - 1;
      if (spec.breakpoints > 0 && spec.breakpoints >= steps)
        throw std::invalid_argument("too many breakpoints for n");
      const std::size_t runs = spec.breakpoints + 1;
      std::vector<Key> run_steps(runs);
      if (spec.kind == SyntheticKind::staircase) {
        for (std::size_t r = 0; r < runs; ++r) run_steps[r] = r % 2 == 0 ? kStairLow : kStairHigh;
      } else {
        std::uniform_int_distribution<Key> d(1, kMaxPieceStep);
        for (std::size_t r = 0; r < runs; ++r) {
          do {
            run_steps[r] = d(rng);
          } while (r > 0 && run_steps[r] == run_steps[r - 1]);
        }
      }
      auto keys = keys_from_steps(spec.n, origin, run_steps, run_lengths(steps, runs));
      return jitter(std::move(keys), spec.noise, rng);
    }
    case SyntheticKind::lognormal: {
      std::lognormal_distribution<double> d(0.0, 2.0);
      std::vector<Key> keys;
      keys.reserve(spec.n);
      while (keys.size() < spec.n) {
        while (keys.size() < spec.n) {
          double v = d(rng) * 1e9;
          if (v < 1e18) keys.push_back(static_cast<Key>(v));
        }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      }
      return Dataset(std::move(keys));
    }
  }
  throw std::invalid_argument("unhandled synthetic kind");
}

}  // namespace gapidx
