#include "gapidx/workload.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gapidx/kernels.hpp"
#include "gapidx/rng.hpp"
#include "gapidx/serialize.hpp"

namespace gapidx {

namespace {

using Clock = std::chrono::steady_clock;

double ns_since(Clock::time_point t0) {
  return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

volatile Payload timing_sink = 0;

struct GappedTimes {
  double predict = 0, correct = 0, overall = 0;
};

// Median per-query times of predict-only, search-only (given hints) and
// end-to-end lookups; `check` sees every result of an untimed pass.
template <typename Check>
GappedTimes time_gapped(const AnyIndex& model, const GappedArray& g, const std::vector<Key>& queries,
                        int repetitions, Check check) {
  GappedTimes t;
  if (queries.empty()) return t;
  const double count = static_cast<double>(queries.size());
  std::vector<Position> hints(queries.size());
  std::vector<double> p, c, o;
  Payload sink = 0;
  std::visit(
      [&](const auto& m) {
        const auto limit = static_cast<Position>(g.size()) - 1;
        auto hint = [&](Key k) { return std::clamp<Position>(m.predict(k).value, 0, limit); };
        for (int rep = 0; rep < repetitions; ++rep) {
          auto t0 = Clock::now();
          for (std::size_t i = 0; i < queries.size(); ++i) hints[i] = hint(queries[i]);
          p.push_back(ns_since(t0) / count);
          t0 = Clock::now();
          for (std::size_t i = 0; i < queries.size(); ++i) sink += g.find(queries[i], hints[i]).value_or(0);
          c.push_back(ns_since(t0) / count);
          t0 = Clock::now();
          for (Key q : queries) sink += g.find(q, hint(q)).value_or(0);
          o.push_back(ns_since(t0) / count);
        }
        for (std::size_t i = 0; i < queries.size(); ++i) check(i, g.find(queries[i], hint(queries[i])));
      },
      model);
  timing_sink = sink;
  t.predict = median(p);
  t.correct = median(c);
  t.overall = median(o);
  return t;
}

// Mean |prediction - slot| over all stored keys.
double physical_mae(const AnyIndex& model, const GappedArray& g) {
  const auto placed = g.entries();
  if (placed.empty()) return 0;
  double sum = 0;
  const auto count = static_cast<std::int64_t>(placed.size());
  std::visit(
      [&](const auto& m) {
#pragma omp parallel for schedule(static) reduction(+ : sum)
        for (std::int64_t i = 0; i < count; ++i) {
          const auto& [e, slot] = placed[static_cast<std::size_t>(i)];
          sum += static_cast<double>(std::llabs(m.predict(e.key).value - static_cast<Position>(slot)));
        }
      },
      model);
  return sum / static_cast<double>(placed.size());
}

}  // namespace

void validate(const WorkloadConfig& c) {
  if (!(c.write_proportion >= 0 && c.write_proportion < 1)) throw std::invalid_argument("w must be in [0, 1)");
  if (c.batches == 0) throw std::invalid_argument("batch count must be >= 1");
  if (c.query_sample_size == 0) throw std::invalid_argument("query count must be >= 1");
  if (!(c.negative_fraction >= 0 && c.negative_fraction <= 1))
    throw std::invalid_argument("negative fraction must be in [0, 1]");
  if (c.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
}

WorkloadSplit split_workload(const Dataset& dataset, const WorkloadConfig& config) {
  validate(config);
  const std::size_t n = dataset.size();
  const auto writes = static_cast<std::size_t>(std::floor(config.write_proportion * static_cast<double>(n)));
  if (n - writes == 0) throw std::invalid_argument("initial set would be empty");

  std::vector<Key> keys(dataset.keys().begin(), dataset.keys().end());
  std::mt19937_64 rng(config.seed);
  std::shuffle(keys.begin(), keys.end(), rng);

  WorkloadSplit s;
  s.initial.assign(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(n - writes));
  std::sort(s.initial.begin(), s.initial.end());
  const std::size_t b = config.batches;
  std::size_t at = n - writes;
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t len = writes / b + (i < writes % b ? 1 : 0);
    s.batches.emplace_back(keys.begin() + static_cast<std::ptrdiff_t>(at),
                           keys.begin() + static_cast<std::ptrdiff_t>(at + len));
    at += len;
  }
  return s;
}

Payload workload_payload(Key key) noexcept { return splitmix64(key); }

DynamicResult run_dynamic(const Dataset& dataset, const WorkloadConfig& config, LearnMethod method,
                          const LearnParams& params, double rho, double rate) {
  auto split = split_workload(dataset, config);
  Dataset initial(split.initial);
  std::vector<Payload> payloads(initial.size());
  for (std::size_t i = 0; i < initial.size(); ++i) payloads[i] = workload_payload(initial[i]);

  auto build = learn_with_gaps(initial, SampleSpec{rate, config.seed}, method, params, rho, payloads);
  const auto model_before = encode_index(build.model);
  auto& g = build.array;

  DynamicResult out;
  out.initial = build.metrics;
  out.initial_gap_fraction = g.gap_fraction();

  std::vector<Key> seen = split.initial;
  std::vector<Key> unseen;
  for (const auto& batch : split.batches) unseen.insert(unseen.end(), batch.begin(), batch.end());
  std::size_t unseen_begin = 0;

  for (std::size_t b = 0; b < split.batches.size(); ++b) {
    BatchReport r;
    r.batch = b + 1;
    for (Key k : split.batches[b]) {
      auto placed = insert(g, build.model, k, workload_payload(k));
      if (placed.outcome == InsertOutcome::duplicate) throw std::logic_error("workload inserted a duplicate key");
      (placed.outcome == InsertOutcome::placed_in_slot ? r.inserted_in_slot : r.inserted_linked) += 1;
    }
    seen.insert(seen.end(), split.batches[b].begin(), split.batches[b].end());
    unseen_begin += split.batches[b].size();
    if (!out.audit_failure) {
      if (auto err = g.audit()) out.audit_failure = "after batch " + std::to_string(b + 1) + ": " + *err;
    }

    std::mt19937_64 rng(splitmix64(config.seed ^ (b + 1)));
    const std::size_t pending = unseen.size() - unseen_begin;
    const std::size_t negatives =
        pending == 0 ? 0
                     : static_cast<std::size_t>(std::llround(config.negative_fraction *
                                                              static_cast<double>(config.query_sample_size)));
    std::vector<Key> queries(config.query_sample_size);
    std::uniform_int_distribution<std::size_t> pick_seen(0, seen.size() - 1);
    for (std::size_t i = negatives; i < queries.size(); ++i) queries[i] = seen[pick_seen(rng)];
    if (negatives > 0) {
      std::uniform_int_distribution<std::size_t> pick_unseen(unseen_begin, unseen.size() - 1);
      for (std::size_t i = 0; i < negatives; ++i) queries[i] = unseen[pick_unseen(rng)];
    }

    bool ok = true;
    auto times = time_gapped(build.model, g, queries, config.repetitions,
                             [&](std::size_t i, std::optional<Payload> got) {
                               if (i < negatives)
                                 ok = ok && !got;
                               else
                                 ok = ok && got && *got == workload_payload(queries[i]);
                             });
    r.keys_seen = seen.size();
    r.queries = queries.size();
    r.negative_queries = negatives;
    r.all_correct = ok;
    r.predict_ns = times.predict;
    r.correct_ns = times.correct;
    r.overall_ns = times.overall;
    r.mae = physical_mae(build.model, g);
    r.gap_fraction = g.gap_fraction();
    out.batches.push_back(r);
  }
  out.model_unchanged = encode_index(build.model) == model_before;
  return out;
}

SweepMethod parse_sweep_method(std::string_view s) {
  if (s == "greedy") return SweepMethod::greedy;
  if (s == "optimal") return SweepMethod::optimal;
  if (s == "rmi") return SweepMethod::rmi;
  if (s == "btree") return SweepMethod::btree;
  if (s == "binary") return SweepMethod::binary;
  throw std::invalid_argument("unknown method: " + std::string(s));
}

std::string_view to_string(SweepMethod m) {
  switch (m) {
    case SweepMethod::greedy: return "greedy";
    case SweepMethod::optimal: return "optimal";
    case SweepMethod::rmi: return "rmi";
    case SweepMethod::btree: return "btree";
    case SweepMethod::binary: return "binary";
  }
  return "?";
}

void validate(const SweepConfig& c) {
  if (c.methods.empty()) throw std::invalid_argument("sweep needs at least one method");
  if (c.alphas.empty() || c.rates.empty() || c.rhos.empty() || c.repetitions == 0)
    throw std::invalid_argument("sweep grid has an empty axis");
  const bool needs_eps = std::any_of(c.methods.begin(), c.methods.end(), [](SweepMethod m) {
    return m == SweepMethod::greedy || m == SweepMethod::optimal || m == SweepMethod::btree;
  });
  if (needs_eps && c.epsilons.empty()) throw std::invalid_argument("sweep needs at least one epsilon");
  if (std::count(c.methods.begin(), c.methods.end(), SweepMethod::rmi) && c.leaf_counts.empty())
    throw std::invalid_argument("sweep needs at least one leaf count");
  for (auto e : c.epsilons)
    if (e < 0) throw std::invalid_argument("epsilon must be >= 0");
  for (auto l : c.leaf_counts)
    if (l == 0) throw std::invalid_argument("leaf count must be >= 1");
  for (auto a : c.alphas)
    if (!(a >= 0) || !std::isfinite(a)) throw std::invalid_argument("alpha must be >= 0");
  for (auto r : c.rates)
    if (!(r > 0 && r <= 1)) throw std::invalid_argument("rate must be in (0, 1]");
  for (auto r : c.rhos)
    if (!(r >= 0) || !std::isfinite(r)) throw std::invalid_argument("rho must be >= 0");
  if (c.btree_fanout < 2) throw std::invalid_argument("B+ tree fanout must be >= 2");
}

MdlReport score_gapped(const GappedBuild& build, const Dataset& dataset, const MdlConfig& config) {
  validate(config);
  const auto& g = build.array;
  MdlReport r;
  r.method = method_name(build.model);
  r.params = param_summary(build.model);
  r.alpha = config.alpha;
  r.build_ns = build.metrics.build_ns;

  kernels::ErrorStats s;
  std::visit(
      [&](const auto& m) {
        for (const auto& [e, slot] : g.entries()) {
          const auto err = std::llabs(m.predict(e.key).value - static_cast<Position>(slot));
          s.count += 1;
          s.sum_abs += static_cast<double>(err);
          s.sum_log2_cost += kernels::log2_cost(err);
          s.max_abs = std::max<std::int64_t>(s.max_abs, err);
        }
      },
      build.model);
  r.mae = s.mae();
  r.max_error = s.max_abs;
  r.l_data = config.data_cost == DataCostKind::mae ? s.mae() : s.mean_log2_cost();
  r.index_size_bytes = serialized_size(build.model);
  r.total_size_bytes = r.index_size_bytes + encode_gapped(g).size();
  r.model_count = model_count(build.model);

  GappedTimes times;
  if (config.query_sample_size > 0) {
    const auto queries = sample_query_keys(dataset, config.query_sample_size, config.seed);
    bool ok = true;
    times = time_gapped(build.model, g, queries, config.repetitions, [&](std::size_t i, std::optional<Payload> got) {
      ok = ok && got && *got == static_cast<Payload>(*dataset.rank_of(queries[i]));
    });
    r.predict_ns = std::llround(times.predict);
    r.correct_ns = std::llround(times.correct);
    r.overall_ns = std::llround(times.overall);
    if (!ok) r.status = "error: lookup returned a wrong payload";
  }
  switch (config.model_cost) {
    case ModelCostKind::param_count: r.l_model = static_cast<double>(param_count(build.model)); break;
    case ModelCostKind::size_bytes: r.l_model = static_cast<double>(r.index_size_bytes); break;
    case ModelCostKind::predict_time_ns:
      if (config.query_sample_size == 0) throw std::invalid_argument("predict-time model cost needs timed queries");
      r.l_model = times.predict;
      break;
  }
  r.mdl = combine_mdl(r.l_model, r.l_data, r.alpha);
  return r;
}

namespace {

struct Cell {
  SweepMethod method;
  std::int64_t epsilon = 0;
  std::size_t leaves = 0;
  double rate = 1;
  double rho = 0;
  std::size_t rep = 0;
};

bool learned(SweepMethod m) { return m == SweepMethod::greedy || m == SweepMethod::optimal || m == SweepMethod::rmi; }

std::string describe(const Cell& c) {
  std::string s;
  switch (c.method) {
    case SweepMethod::greedy:
    case SweepMethod::optimal: s = "eps=" + std::to_string(c.epsilon); break;
    case SweepMethod::rmi: s = "leaves=" + std::to_string(c.leaves); break;
    case SweepMethod::btree: s = "page=" + std::to_string(2 * c.epsilon); break;
    case SweepMethod::binary: s = "-"; break;
  }
  if (c.rate != 1) s += ";rate=" + fmt(c.rate);
  if (c.rho != 0) s += ";rho=" + fmt(c.rho);
  return s;
}

std::string suffix(const Cell& c) {
  std::string s;
  if (c.rate != 1) s += ";rate=" + fmt(c.rate);
  if (c.rho != 0) s += ";rho=" + fmt(c.rho);
  return s;
}

std::vector<MdlReport> run_cell(const Dataset& ds, const SweepConfig& cfg, const Cell& c) {
  MdlConfig mc = cfg.mdl;
  mc.seed = splitmix64(cfg.seed + c.rep);
  mc.alpha = cfg.alphas.front();
  std::vector<MdlReport> rows;
  try {
    MdlReport first;
    if (learned(c.method)) {
      const LearnMethod lm = c.method == SweepMethod::greedy    ? LearnMethod::greedy
                             : c.method == SweepMethod::optimal ? LearnMethod::optimal
                                                                : LearnMethod::rmi;
      LearnParams p;
      p.epsilon = c.epsilon;
      p.leaf_count = c.leaves;
      const SampleSpec spec{c.rate, mc.seed};
      if (c.rho > 0) {
        first = score_gapped(learn_with_gaps(ds, spec, lm, p, c.rho), ds, mc);
      } else {
        auto b = learn_with_sampling(ds, spec, lm, p);
        first = mdl_score(b.index, ds, mc, b.build_ns);
      }
    } else {
      const auto t0 = Clock::now();
      AnyIndex idx = c.method == SweepMethod::binary
                         ? BaselineIndex::binary_search(ds.size())
                         : BaselineIndex::btree(ds.keys(), static_cast<std::size_t>(std::max<std::int64_t>(1, 2 * c.epsilon)),
                                                cfg.btree_fanout);
      first = mdl_score(idx, ds, mc, static_cast<std::int64_t>(ns_since(t0)));
    }
    first.params += suffix(c);
    for (double a : cfg.alphas) {
      MdlReport r = first;
      r.alpha = a;
      r.mdl = combine_mdl(r.l_model, r.l_data, a);
      rows.push_back(std::move(r));
    }
  } catch (const std::exception& e) {
    rows.clear();
    for (double a : cfg.alphas) {
      MdlReport r;
      r.method = std::string(to_string(c.method));
      r.params = describe(c);
      r.alpha = a;
      r.status = std::string("error: ") + e.what();
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace

std::vector<MdlReport> run_sweep(const Dataset& dataset, const SweepConfig& config) {
  validate(config);
  std::vector<Cell> cells;
  for (auto m : config.methods) {
    std::vector<Cell> params;
    switch (m) {
      case SweepMethod::greedy:
      case SweepMethod::optimal:
      case SweepMethod::btree:
        for (auto e : config.epsilons) params.push_back({m, e, 0});
        break;
      case SweepMethod::rmi:
        for (auto l : config.leaf_counts) params.push_back({m, 0, l});
        break;
      case SweepMethod::binary: params.push_back({m}); break;
    }
    const std::vector<double> rates = learned(m) ? config.rates : std::vector<double>{1.0};
    const std::vector<double> rhos = learned(m) ? config.rhos : std::vector<double>{0.0};
    for (const auto& p : params)
      for (double rate : rates)
        for (double rho : rhos)
          for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
            Cell c = p;
            c.rate = rate;
            c.rho = rho;
            c.rep = rep;
            cells.push_back(c);
          }
  }

  std::vector<std::vector<MdlReport>> per_cell(cells.size());
  const auto count = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic) if (!config.sequential)
  for (std::int64_t i = 0; i < count; ++i)
    per_cell[static_cast<std::size_t>(i)] = run_cell(dataset, config, cells[static_cast<std::size_t>(i)]);

  std::vector<MdlReport> rows;
  for (auto& v : per_cell)
    for (auto& r : v) rows.push_back(std::move(r));
  return rows;
}

}  // namespace gapidx
