#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gapidx/dataset.hpp"
#include "gapidx/index.hpp"

namespace gapidx {

enum class ModelCostKind { param_count, size_bytes, predict_time_ns };
enum class DataCostKind { log2_correction, mae };

ModelCostKind parse_model_cost_kind(std::string_view s);
DataCostKind parse_data_cost_kind(std::string_view s);

struct MdlConfig {
  // Weight of the data term. Zero is accepted as the degenerate case that
  // scores the model alone.
  double alpha = 1.0;
  ModelCostKind model_cost = ModelCostKind::param_count;
  DataCostKind data_cost = DataCostKind::log2_correction;
  // Timing: query count per repetition (0 skips timing) and repetitions.
  std::size_t query_sample_size = 10'000;
  int repetitions = 5;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument for negative or non-finite alpha, or too few repetitions.
void validate(const MdlConfig& config);

/// Mean correction cost of the index over the whole dataset.
/// Throws std::invalid_argument on an empty dataset.
double data_cost(const AnyIndex& index, const Dataset& dataset, DataCostKind kind);

/// Parameter count or serialized size. predict_time_ns needs a dataset to time
/// against and throws std::invalid_argument here.
double model_cost(const AnyIndex& index, ModelCostKind kind);
double model_cost(const AnyIndex& index, ModelCostKind kind, const Dataset& dataset, std::uint64_t seed = 0);

struct QueryTimes {
  // Per-query nanoseconds; medians and means over repetitions.
  double predict_median = 0, predict_mean = 0;
  double correct_median = 0, correct_mean = 0;
  double overall_median = 0, overall_mean = 0;
  double mean_probes = 0;
  std::size_t queries = 0;
  bool all_correct = true;
};

/// Uniform (with replacement) sample of present keys, deterministic per seed.
std::vector<Key> sample_query_keys(const Dataset& dataset, std::size_t count, std::uint64_t seed);

/// Times predict-only, correct-only (on precomputed predictions) and
/// end-to-end lookups. Requires sample_size >= 1.
QueryTimes measure_query_times(const AnyIndex& index, const Dataset& dataset, std::size_t sample_size,
                               std::uint64_t seed, int repetitions = 5);

struct MdlReport {
  std::string method;
  std::string params;
  double alpha = 0;
  double l_model = 0;
  double l_data = 0;
  double mdl = 0;
  double mae = 0;
  std::int64_t max_error = 0;
  std::int64_t build_ns = 0;
  std::int64_t predict_ns = 0;
  std::int64_t correct_ns = 0;
  std::int64_t overall_ns = 0;
  std::size_t index_size_bytes = 0;  // model only
  std::size_t model_count = 0;
  std::size_t total_size_bytes = 0;  // model plus 16 bytes (key, payload) per indexed key
  std::string status = "ok";
};

/// l_model + alpha * l_data.
inline double combine_mdl(double l_model, double l_data, double alpha) { return l_model + alpha * l_data; }

/// Scores one index on a dataset. `build_ns` is passed through from whoever built it.
MdlReport mdl_score(const AnyIndex& index, const Dataset& dataset, const MdlConfig& config,
                    std::int64_t build_ns = 0);

}  // namespace gapidx
