#include "gapidx/mdl.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "gapidx/kernels.hpp"
#include "gapidx/serialize.hpp"

namespace gapidx {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double ns_since(Clock::time_point t0) {
  return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

}  // namespace

ModelCostKind parse_model_cost_kind(std::string_view s) {
  if (s == "param-count" || s == "params") return ModelCostKind::param_count;
  if (s == "size-bytes" || s == "size") return ModelCostKind::size_bytes;
  if (s == "predict-time-ns" || s == "predict-time") return ModelCostKind::predict_time_ns;
  throw std::invalid_argument("unknown model cost kind: " + std::string(s));
}

DataCostKind parse_data_cost_kind(std::string_view s) {
  if (s == "log2-correction" || s == "log2") return DataCostKind::log2_correction;
  if (s == "mae") return DataCostKind::mae;
  throw std::invalid_argument("unknown data cost kind: " + std::string(s));
}

void validate(const MdlConfig& config) {
  if (!std::isfinite(config.alpha) || config.alpha < 0) throw std::invalid_argument("alpha must be >= 0");
  if (config.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
}

double data_cost(const AnyIndex& index, const Dataset& dataset, DataCostKind kind) {
  if (dataset.empty()) throw std::invalid_argument("data cost of an empty dataset");
  auto stats = kernels::error_stats(index, dataset.keys());
  return kind == DataCostKind::mae ? stats.mae() : stats.mean_log2_cost();
}

double model_cost(const AnyIndex& index, ModelCostKind kind) {
  switch (kind) {
    case ModelCostKind::param_count: return static_cast<double>(param_count(index));
    case ModelCostKind::size_bytes: return static_cast<double>(serialized_size(index));
    case ModelCostKind::predict_time_ns: break;
  }
  throw std::invalid_argument("predict-time model cost needs a dataset");
}

double model_cost(const AnyIndex& index, ModelCostKind kind, const Dataset& dataset, std::uint64_t seed) {
  if (kind != ModelCostKind::predict_time_ns) return model_cost(index, kind);
  return measure_query_times(index, dataset, std::min<std::size_t>(dataset.size(), 10'000), seed)
      .predict_median;
}

std::vector<Key> sample_query_keys(const Dataset& dataset, std::size_t count, std::uint64_t seed) {
  if (dataset.empty()) throw std::invalid_argument("cannot sample queries from an empty dataset");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, dataset.size() - 1);
  std::vector<Key> q(count);
  for (auto& k : q) k = dataset[pick(rng)];
  return q;
}

QueryTimes measure_query_times(const AnyIndex& index, const Dataset& dataset, std::size_t sample_size,
                               std::uint64_t seed, int repetitions) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  const auto queries = sample_query_keys(dataset, sample_size, seed);
  const auto keys = dataset.keys();
  const bool exact = has_exact_bounds(index);
  const double count = static_cast<double>(queries.size());

  std::vector<double> pred_ns, corr_ns, all_ns;
  std::vector<PredictedPosition> guesses(queries.size());
  QueryTimes out;
  out.queries = queries.size();
  std::size_t probes = 0;
  Position sink = 0;

  std::visit(
      [&](const auto& m) {
        auto fix = [&](const PredictedPosition& g, Key q) {
          return exact ? correct_binary(keys, g, q) : correct_exponential(keys, g, q);
        };
        for (int rep = 0; rep < repetitions; ++rep) {
          auto t0 = Clock::now();
          for (std::size_t i = 0; i < queries.size(); ++i) guesses[i] = m.predict(queries[i]);
          pred_ns.push_back(ns_since(t0) / count);
          for (const auto& g : guesses) sink += g.value;

          t0 = Clock::now();
          for (std::size_t i = 0; i < queries.size(); ++i) sink += fix(guesses[i], queries[i]).position.value_or(-1);
          corr_ns.push_back(ns_since(t0) / count);

          t0 = Clock::now();
          for (Key q : queries) sink += fix(m.predict(q), q).position.value_or(-1);
          all_ns.push_back(ns_since(t0) / count);
        }
        // Untimed verification pass.
        for (std::size_t i = 0; i < queries.size(); ++i) {
          auto r = fix(guesses[i], queries[i]);
          probes += r.probes;
          if (!r.position || keys[static_cast<std::size_t>(*r.position)] != queries[i]) out.all_correct = false;
        }
      },
      index);

  // Keep the timed loops observable.
  if (sink == std::numeric_limits<Position>::min()) out.mean_probes = -1;

  out.predict_median = median(pred_ns);
  out.predict_mean = mean(pred_ns);
  out.correct_median = median(corr_ns);
  out.correct_mean = mean(corr_ns);
  out.overall_median = median(all_ns);
  out.overall_mean = mean(all_ns);
  out.mean_probes = static_cast<double>(probes) / count;
  return out;
}

MdlReport mdl_score(const AnyIndex& index, const Dataset& dataset, const MdlConfig& config,
                    std::int64_t build_ns) {
  validate(config);
  if (dataset.empty()) throw std::invalid_argument("cannot score on an empty dataset");
  MdlReport r;
  r.method = method_name(index);
  r.params = param_summary(index);
  r.alpha = config.alpha;

  auto stats = kernels::error_stats(index, dataset.keys());
  r.mae = stats.mae();
  r.max_error = stats.max_abs;
  r.l_data = config.data_cost == DataCostKind::mae ? stats.mae() : stats.mean_log2_cost();

  r.index_size_bytes = serialized_size(index);
  r.total_size_bytes = r.index_size_bytes + dataset.size() * 2 * sizeof(Key);
  r.model_count = model_count(index);
  r.build_ns = build_ns;

  QueryTimes times;
  const bool timed = config.query_sample_size > 0;
  if (timed) {
    times = measure_query_times(index, dataset, config.query_sample_size, config.seed, config.repetitions);
    r.predict_ns = std::llround(times.predict_median);
    r.correct_ns = std::llround(times.correct_median);
    r.overall_ns = std::llround(times.overall_median);
    if (!times.all_correct) r.status = "error: lookup returned a wrong position";
  }

  switch (config.model_cost) {
    case ModelCostKind::param_count: r.l_model = static_cast<double>(param_count(index)); break;
    case ModelCostKind::size_bytes: r.l_model = static_cast<double>(r.index_size_bytes); break;
    case ModelCostKind::predict_time_ns:
      r.l_model = timed ? times.predict_median : model_cost(index, config.model_cost, dataset, config.seed);
      break;
  }
  r.mdl = combine_mdl(r.l_model, r.l_data, r.alpha);
  return r;
}

}  // namespace gapidx
