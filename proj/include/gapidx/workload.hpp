#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gapidx/gapped_pipeline.hpp"
#include "gapidx/mdl.hpp"

namespace gapidx {

struct WorkloadConfig {
  double write_proportion = 0.3;  // w in [0, 1)
  std::size_t batches = 5;
  std::uint64_t seed = 0;
  std::size_t query_sample_size = 10'000;
  // Share of each batch's queries drawn from keys not inserted yet.
  double negative_fraction = 0.0;
  int repetitions = 5;
};

/// Throws std::invalid_argument on an out-of-range field.
void validate(const WorkloadConfig& config);

struct WorkloadSplit {
  std::vector<Key> initial;                // sorted
  std::vector<std::vector<Key>> batches;   // insertion order
};

/// |initial| = n - floor(w * n); the rest is dealt at random into B batches
/// whose sizes differ by at most one.
WorkloadSplit split_workload(const Dataset& dataset, const WorkloadConfig& config);

/// Payload stored with a key by the workload harness.
Payload workload_payload(Key key) noexcept;

struct BatchReport {
  std::size_t batch = 0;  // 1-based
  std::size_t keys_seen = 0;
  std::size_t inserted_in_slot = 0;
  std::size_t inserted_linked = 0;
  double mae = 0;  // model vs physical slot, over keys seen so far
  double predict_ns = 0;
  double correct_ns = 0;
  double overall_ns = 0;
  double gap_fraction = 0;
  std::size_t queries = 0;
  std::size_t negative_queries = 0;
  bool all_correct = true;
};

struct DynamicResult {
  GapMetrics initial;
  double initial_gap_fraction = 0;
  std::vector<BatchReport> batches;
  bool model_unchanged = true;  // serialized model identical before and after
  std::optional<std::string> audit_failure;
};

/// Builds a gapped index on D_init with learn_with_gaps, then inserts the
/// batches one by one without retraining, querying a uniform sample of the
/// keys seen so far after each batch.
DynamicResult run_dynamic(const Dataset& dataset, const WorkloadConfig& config, LearnMethod method,
                          const LearnParams& params, double rho, double rate);

enum class SweepMethod { greedy, optimal, rmi, btree, binary };

SweepMethod parse_sweep_method(std::string_view s);
std::string_view to_string(SweepMethod m);

struct SweepConfig {
  std::vector<SweepMethod> methods;
  std::vector<std::int64_t> epsilons{64};
  std::vector<std::size_t> leaf_counts{1024};
  std::vector<double> alphas{1.0};
  // Rates and gap ratios apply to the learned methods only.
  std::vector<double> rates{1.0};
  std::vector<double> rhos{0.0};
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  std::size_t btree_fanout = 16;
  bool sequential = false;
  MdlConfig mdl;  // alpha and seed are overridden per row
};

/// Throws std::invalid_argument for an empty or invalid grid.
void validate(const SweepConfig& config);

/// One row per (method, parameter, rate, rho, repetition, alpha) in grid
/// order. Rows for different alphas share one build. A cell that throws
/// yields rows whose status starts with "error:".
std::vector<MdlReport> run_sweep(const Dataset& dataset, const SweepConfig& config);

/// Scores a gapped build: errors are against physical slots and lookups go
/// through the gapped array.
MdlReport score_gapped(const GappedBuild& build, const Dataset& dataset, const MdlConfig& config);

}  // namespace gapidx
