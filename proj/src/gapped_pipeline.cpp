#include "gapidx/gapped_pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace gapidx {

GappedBuild learn_with_gaps(const Dataset& dataset, const SampleSpec& spec, LearnMethod method,
                            const LearnParams& params, double rho, std::span<const Payload> payloads) {
  if (dataset.empty()) throw std::invalid_argument("cannot build a gapped index on an empty dataset");
  if (!payloads.empty() && payloads.size() != dataset.size())
    throw std::invalid_argument("payload count differs from key count");
  const std::size_t n = dataset.size();
  const auto t0 = std::chrono::steady_clock::now();

  SampledPairs sample;
  if (n < 2) {
    sample.pairs = dataset.pairs();
    sample.source_n = n;
  } else {
    sample = sample_uniform(dataset, spec);
  }
  const bool sampled = sample.pairs.size() < n;
  const auto plan_algo = method == LearnMethod::greedy ? PlaAlgorithm::greedy_cone : PlaAlgorithm::optimal;
  const auto planner = fit_segments(plan_algo, sample.pairs, params.epsilon, static_cast<Position>(n));

  GappedBuild out;
  out.plan = plan_gaps(planner, sample.pairs, rho);
  const std::size_t slots = std::max(out.plan.slot_count(), n);
  const auto refit_pairs = out.plan.rounded_pairs();
  out.model = fit_method(method, refit_pairs, params, static_cast<Position>(slots));
  if (sampled) {
    if (auto* s = std::get_if<SegmentIndex>(&out.model))
      out.model = patch_connect_segments(*s, dataset.min_key(), dataset.max_key());
    else if (auto* r = std::get_if<RmiIndex>(&out.model))
      out.model = patch_rmi_nearest_seg(*r);
  }

  std::vector<Entry> entries(n);
  for (std::size_t i = 0; i < n; ++i) entries[i] = {dataset[i], payloads.empty() ? Payload{i} : payloads[i]};
  out.array = build_gapped(out.model, entries, slots);
  const auto t1 = std::chrono::steady_clock::now();

  auto& m = out.metrics;
  m.build_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
  m.n = n;
  m.sample_size = sample.pairs.size();
  m.slots = out.array.size();
  m.segments = planner.segment_count();
  m.total_gaps = out.plan.total_gaps();
  m.gap_budget = rho * static_cast<double>(n) + static_cast<double>(m.segments);
  m.gap_fraction = out.array.gap_fraction();
  m.linked_keys = out.array.key_count() - out.array.occupied_count();

  const auto placed = out.array.entries();
  double sum = 0;
  std::int64_t worst = 0;
  std::visit(
      [&](const auto& model) {
        const auto count = static_cast<std::int64_t>(placed.size());
#pragma omp parallel for schedule(static) reduction(+ : sum) reduction(max : worst)
        for (std::int64_t i = 0; i < count; ++i) {
          const auto& [e, slot] = placed[static_cast<std::size_t>(i)];
          auto err = std::llabs(model.predict(e.key).value - static_cast<Position>(slot));
          sum += static_cast<double>(err);
          worst = std::max<std::int64_t>(worst, err);
        }
        double tsum = 0;
        const auto& keys = out.plan.keys;
        const auto& targets = out.plan.targets;
        for (std::size_t i = 0; i < keys.size(); ++i)
          tsum += std::abs(static_cast<double>(model.predict(keys[i]).value) - targets[i]);
        m.mae_target = tsum / static_cast<double>(keys.size());
      },
      out.model);
  m.mae_physical = sum / static_cast<double>(n);
  m.max_physical = worst;
  return out;
}

}  // namespace gapidx
