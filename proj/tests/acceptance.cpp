// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gapidx/gapped_pipeline.hpp"
#include "gapidx/kernels.hpp"
#include "gapidx/mdl.hpp"
#include "gapidx/sampling.hpp"
#include "gapidx/synthetic.hpp"
#include "gapidx/workload.hpp"
#include "pla_oracle.hpp"

using namespace gapidx;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::int64_t worst(const SegmentIndex& idx, std::span<const KeyPositionPair> pairs) {
  return kernels::error_stats(idx, pairs).max_abs;
}

std::vector<Dataset> criterion1_datasets() {
  const SyntheticKind kinds[] = {SyntheticKind::lognormal, SyntheticKind::piecewise_linear, SyntheticKind::staircase,
                                 SyntheticKind::linear};
  std::vector<Dataset> out;
  for (std::uint64_t i = 0; i < 20; ++i)
    out.push_back(generate_synthetic({kinds[i % 4], 100000, 5 + 10 * i, 4 + i, 1000 + i}));
  return out;
}

// 1 and the greedy comparison half of 2.
bool opt_le_greedy_everywhere = true;

void criterion1(const std::vector<Dataset>& sets) {
  auto t0 = Clock::now();
  std::size_t fits = 0, bad_keys = 0;
  for (const auto& ds : sets) {
    auto pairs = ds.pairs();
    for (std::int64_t eps : {8, 64, 256}) {
      auto g = fit_greedy_cone(pairs, eps);
      auto o = fit_optimal_pla(pairs, eps);
      for (const auto* idx : {&g, &o}) {
        ++fits;
        for (const auto& p : pairs)
          if (std::llabs(idx->predict(p.key).value - p.position) > eps) ++bad_keys;
      }
      if (o.segment_count() > g.segment_count()) opt_le_greedy_everywhere = false;
    }
  }
  double s = seconds_since(t0);
  report(1, bad_keys == 0 && s < 30, fmt("%zu fits, %zu keys outside epsilon, %.2f s", fits, bad_keys, s));
}

void criterion2() {
  std::mt19937_64 rng(2024);
  int matches = 0;
  for (int t = 0; t < 50; ++t) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
    const auto eps = std::uniform_int_distribution<std::int64_t>(0, 4)(rng);
    const Key max_gap = std::array<Key, 3>{3, 50, 10000}[static_cast<std::size_t>(t % 3)];
    std::vector<KeyPositionPair> pairs;
    Key k = rng() % 1000;
    for (std::size_t i = 0; i < n; ++i) {
      k += 1 + rng() % max_gap;
      pairs.push_back({k, static_cast<Position>(i)});
    }
    if (fit_optimal_pla(pairs, eps).segment_count() == oracle::min_segments(pairs, eps)) ++matches;
  }
  report(2, matches == 50 && opt_le_greedy_everywhere,
         fmt("%d/50 match the exhaustive minimum; optimal <= greedy on all criterion-1 fits: %s", matches,
             opt_le_greedy_everywhere ? "yes" : "no"));
}

void criterion3() {
  std::vector<KeyPositionPair> pairs{{2, 0}, {4, 1}, {5, 2}, {6, 3}, {8, 4}};
  auto learned = fit_optimal_pla(pairs, 1);
  auto greedy = fit_greedy_cone(pairs, 1);
  // round(0.7x - 0.5) on 1-based positions, shifted to 0-based
  SegmentIndex ref({{2, 8, 0.7, 0.7 * 2 - 1.5, 0, 4}}, 1, PlaAlgorithm::optimal, 5);
  auto mae = kernels::error_stats(ref, std::span<const KeyPositionPair>(pairs)).mae();
  bool ok = learned.segment_count() == 1 && greedy.segment_count() == 1 && worst(learned, pairs) <= 1 && mae == 0;
  report(3, ok, fmt("segments optimal=%zu greedy=%zu, reference MAE %.3f", learned.segment_count(),
                    greedy.segment_count(), mae));
}

void criterion4() {
  auto t0 = Clock::now();
  auto ds = generate_synthetic({SyntheticKind::piecewise_linear, 1000000, 20, 40, 4});
  const LearnParams p{64, 0};
  std::vector<std::int64_t> full_ns, part_ns;
  SampledBuild full, part;
  for (int r = 0; r < 5; ++r) {
    full = learn_with_sampling(ds, {1.0, 7}, LearnMethod::optimal, p);
    part = learn_with_sampling(ds, {0.01, 7}, LearnMethod::optimal, p);
    full_ns.push_back(full.build_ns);
    part_ns.push_back(part.build_ns);
  }
  std::sort(full_ns.begin(), full_ns.end());
  std::sort(part_ns.begin(), part_ns.end());
  const double speedup = double(full_ns[2]) / double(std::max<std::int64_t>(1, part_ns[2]));
  const double mae_full = kernels::error_stats(full.index, ds.keys()).mae();
  const double mae_part = kernels::error_stats(part.index, ds.keys()).mae();
  auto lookups = kernels::verify_lookups(part.index, ds.keys(), ds.keys());
  const bool exponential = !has_exact_bounds(part.index);
  double s = seconds_since(t0);
  bool ok = speedup >= 5 && mae_part <= 2 * mae_full && lookups.correct == ds.size() && exponential && s < 120;
  report(4, ok,
         fmt("speedup %.1fx, MAE %.2f vs %.2f, %zu/%zu lookups correct (exponential search), %.1f s", speedup,
             mae_part, mae_full, lookups.correct, ds.size(), s));
}

void criterion5() {
  auto t0 = Clock::now();
  auto ds = generate_synthetic({SyntheticKind::lognormal, 200000, 0, 0, 5});
  AnyIndex idx = fit_optimal_pla(ds.pairs(), 64);
  auto r = check_hoeffding_bound(ds, idx, 1000, 0.05, 200, 5);
  const double frac = double(r.violations) / double(r.trials);
  double s = seconds_since(t0);
  report(5, frac <= 0.10 && s < 60,
         fmt("%zu/%zu violations (%.3f), bound %.4f, E=%lld, %.2f s", r.violations, r.trials, frac, r.bound,
             static_cast<long long>(r.max_error), s));
}

void criterion6() {
  auto ds = generate_synthetic({SyntheticKind::piecewise_linear, 100000, 10, 20, 1});
  const LearnParams p{64, 0};
  const SampleSpec spec{0.1, 1};
  auto base = learn_with_gaps(ds, spec, LearnMethod::optimal, p, 0.0);
  auto gapped = learn_with_gaps(ds, spec, LearnMethod::optimal, p, 0.5);

  const double a = base.metrics.mae_physical, b = gapped.metrics.mae_physical;
  const bool improves = b <= a / 1.2;

  const auto& plan = gapped.plan;
  const bool budget = double(plan.total_gaps()) <= 0.5 * double(ds.size()) + double(plan.anchors.size());

  auto sample = sample_uniform(ds, spec);
  bool identity = base.plan.targets.size() == sample.pairs.size();
  for (std::size_t i = 0; identity && i < sample.pairs.size(); ++i)
    identity = base.plan.keys[i] == sample.pairs[i].key &&
               base.plan.targets[i] == static_cast<double>(sample.pairs[i].position);

  report(6, improves && budget && identity,
         fmt("MAE rho=0 %.3f, rho=0.5 %.3f (ratio %.2f, need >= 1.2); gaps %lld <= budget %.0f: %s; rho=0 identity: %s",
             a, b, a / b, static_cast<long long>(plan.total_gaps()), 0.5 * double(ds.size()) + double(plan.anchors.size()),
             budget ? "yes" : "no", identity ? "yes" : "no"));
}

void criterion7() {
  auto t0 = Clock::now();
  auto pool = generate_synthetic({SyntheticKind::piecewise_linear, 40000, 30, 16, 7});
  std::mt19937_64 rng(7);
  std::vector<Key> initial;
  for (Key k : pool.keys())
    if (rng() % 2) initial.push_back(k);
  Dataset ds(initial);

  std::size_t mismatches = 0, audits = 0, audit_failures = 0, ops = 0;
  for (double rho : {0.0, 0.5}) {
    auto b = learn_with_gaps(ds, {0.1, 3}, LearnMethod::optimal, {32, 0}, rho);
    auto& g = b.array;
    std::map<Key, Payload> oracle;
    for (std::size_t i = 0; i < ds.size(); ++i) oracle[ds[i]] = i;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int op = 1; op <= 10000; ++op, ++ops) {
      Key k = rng() % 10 == 0 ? pool[pick(rng)] + 1 : pool[pick(rng)];
      Payload v = rng();
      bool same = true;
      switch (rng() % 4) {
        case 0: {
          auto it = oracle.find(k);
          auto got = lookup(g, b.model, k);
          same = it == oracle.end() ? !got : got == it->second;
          break;
        }
        case 1: {
          bool fresh = oracle.emplace(k, v).second;
          same = (insert(g, b.model, k, v).outcome != InsertOutcome::duplicate) == fresh;
          break;
        }
        case 2: same = erase(g, b.model, k) == (oracle.erase(k) == 1); break;
        default: {
          auto it = oracle.find(k);
          if (it != oracle.end()) it->second = v;
          same = update(g, b.model, k, v) == (it != oracle.end());
        }
      }
      if (!same) ++mismatches;
      if (op % 100 == 0) {
        ++audits;
        if (g.audit()) ++audit_failures;
      }
    }
    auto stored = g.entries();
    if (stored.size() != oracle.size()) ++mismatches;
    auto it = oracle.begin();
    for (std::size_t i = 0; i < stored.size() && it != oracle.end(); ++i, ++it)
      if (stored[i].first.key != it->first || stored[i].first.payload != it->second) ++mismatches;
  }
  double s = seconds_since(t0);
  report(7, mismatches == 0 && audit_failures == 0 && s < 60,
         fmt("%zu ops, %zu mismatches, %zu/%zu audits passed, %.2f s", ops, mismatches, audits - audit_failures,
             audits, s));
}

void criterion8() {
  auto ds = generate_synthetic({SyntheticKind::lognormal, 200000, 0, 0, 8});
  bool ok = true;
  std::string detail;
  for (double w : {0.3, 0.7}) {
    WorkloadConfig c;
    c.write_proportion = w;
    c.batches = 5;
    c.seed = 8;
    c.repetitions = 1;
    auto r = run_dynamic(ds, c, LearnMethod::optimal, {64, 0}, 0.5, 0.1);
    bool correct = r.batches.size() == 5, monotone = true;
    double prev = r.initial_gap_fraction;
    for (const auto& b : r.batches) {
      correct = correct && b.all_correct;
      monotone = monotone && b.gap_fraction <= prev;
      prev = b.gap_fraction;
    }
    ok = ok && correct && monotone && r.model_unchanged && !r.audit_failure;
    detail += fmt("w=%.1f: queries %s, gap fraction %.3f -> %.3f %s, model %s; ", w, correct ? "correct" : "WRONG",
                  r.initial_gap_fraction, prev, monotone ? "non-increasing" : "INCREASED",
                  r.model_unchanged ? "unchanged" : "CHANGED");
  }
  report(8, ok, detail);
}

void criterion9() {
  auto ds = generate_synthetic({SyntheticKind::piecewise_linear, 200000, 50, 30, 9});
  auto pairs = ds.pairs();
  const std::int64_t epsilons[] = {8, 32, 128, 512};
  std::vector<MdlReport> reports;
  MdlConfig cfg;
  cfg.query_sample_size = 0;
  for (auto e : epsilons) reports.push_back(mdl_score(fit_optimal_pla(pairs, e), ds, cfg));

  std::vector<std::int64_t> best;
  for (double alpha : {0.1, 1.0, 10.0}) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < reports.size(); ++i)
      if (combine_mdl(reports[i].l_model, reports[i].l_data, alpha) <
          combine_mdl(reports[arg].l_model, reports[arg].l_data, alpha))
        arg = i;
    best.push_back(epsilons[arg]);
  }
  bool ok = best[0] >= best[1] && best[1] >= best[2];
  std::string detail = "argmin epsilon for alpha 0.1, 1, 10: ";
  for (auto b : best) detail += std::to_string(b) + " ";
  report(9, ok, detail);
}

}  // namespace

int main() {
  auto sets = criterion1_datasets();
  criterion1(sets);
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
