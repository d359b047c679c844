#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "gapidx/dataset.hpp"
#include "gapidx/index.hpp"

namespace gapidx {

struct SampleSpec {
  double rate = 1.0;  // in (0, 1]
  std::uint64_t seed = 0;
};

/// Sampled pairs carry GLOBAL ranks of the source dataset.
struct SampledPairs {
  std::vector<KeyPositionPair> pairs;
  std::size_t source_n = 0;
};

/// Draws max(2, round(rate * n)) pairs without replacement, always including
/// the first and last keys. Deterministic per seed. Throws
/// std::invalid_argument for rate outside (0, 1] or n < 2.
SampledPairs sample_uniform(const Dataset& dataset, const SampleSpec& spec);

/// Sorted set of `count` distinct indices drawn uniformly from [0, n).
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed);

/// Closes the key gaps between consecutive segments with connector lines
/// through the left segment's last training point and the right segment's
/// first one, and stretches the outer segments to cover [min_key, max_key].
SegmentIndex patch_connect_segments(const SegmentIndex& index, Key min_key, Key max_key);

/// Copies model and error bounds of the nearest trained leaf (by leaf id,
/// ties to the lower id) into every untrained leaf.
/// Throws std::invalid_argument if no leaf is trained.
RmiIndex patch_rmi_nearest_seg(const RmiIndex& index);

/// max(n_min, ceil(c * alpha^2 * log2(E)^2)).
std::size_t guideline_sample_size(double alpha, std::int64_t max_error, double c = 1.0, std::size_t n_min = 64);

enum class LearnMethod { greedy, optimal, rmi };

LearnMethod parse_learn_method(std::string_view s);
std::string_view to_string(LearnMethod m);

struct LearnParams {
  std::int64_t epsilon = 64;
  std::size_t leaf_count = 1024;
};

/// Fits on (key, position) pairs; positions are predicted in [0, position_limit).
AnyIndex fit_method(LearnMethod method, std::span<const KeyPositionPair> pairs, const LearnParams& params,
                    Position position_limit);

struct SampledBuild {
  AnyIndex index;
  std::int64_t build_ns = 0;
  std::size_t sample_size = 0;
  // Segments or leaves learned from the sample, before patching.
  std::size_t fitted_model_count = 0;
};

/// sample -> fit -> patch. With a sample equal to the full data no patch is
/// applied and the index keeps exact bounds; otherwise lookups must use
/// exponential search (has_exact_bounds() is false).
SampledBuild learn_with_sampling(const Dataset& dataset, const SampleSpec& spec, LearnMethod method,
                                 const LearnParams& params);

struct BoundCheckReport {
  std::size_t trials = 0;
  double delta = 0;
  std::size_t sample_size = 0;
  std::int64_t max_error = 0;
  double full_loss = 0;  // L(D|M), log2-correction
  double bound = 0;      // identical for every trial
  std::size_t violations = 0;
  std::vector<double> deviations;  // |L(D_s|M) - L(D|M)| per trial
  std::vector<double> bound_values;
  // Samples are drawn without replacement, while the Hoeffding argument is
  // stated for independent draws.
  static constexpr std::string_view sampling_note = "without-replacement sampling; i.i.d. bound applied";
};

/// Monte-Carlo check of the Hoeffding estimate of the correction cost:
/// bound = log2(E) / sqrt(2 n_s) * sqrt(ln(2 / delta)). Trials run in parallel
/// with per-trial seeds derived from `seed`.
BoundCheckReport check_hoeffding_bound(const Dataset& dataset, const AnyIndex& index, std::size_t sample_size,
                                       double delta, std::size_t trials, std::uint64_t seed);

}  // namespace gapidx
