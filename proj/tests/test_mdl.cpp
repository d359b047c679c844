#include "doctest.h"
#include "gapidx/kernels.hpp"
#include "gapidx/mdl.hpp"
#include "gapidx/serialize.hpp"
#include "gapidx/synthetic.hpp"

using namespace gapidx;

namespace {

SegmentIndex three_segments() {
  std::vector<LinearSegment> segs{{0, 9, 1, 0, 0, 9}, {10, 19, 1, 10, 10, 19}, {20, 29, 1, 20, 20, 29}};
  return SegmentIndex(segs, 0, PlaAlgorithm::optimal, 30);
}

}  // namespace

TEST_CASE("combine") {
  CHECK(combine_mdl(10, 3, 2) == 16);
  CHECK(combine_mdl(10, 3, 0) == 10);
}

TEST_CASE("data cost") {
  Dataset ds({10, 20, 30});
  // Constant prediction 0 over three keys: errors {0, 1, 2}.
  SegmentIndex flat({{10, 30, 0.0, 0.0, 0, 2}}, 2, PlaAlgorithm::optimal, 3);
  CHECK(data_cost(flat, ds, DataCostKind::mae) == doctest::Approx(1.0));
  CHECK(data_cost(flat, ds, DataCostKind::log2_correction) == doctest::Approx((1.0 + 1.0 + 2.0) / 3));

  auto exact = fit_optimal_pla(ds.pairs(), 0);
  CHECK(data_cost(exact, ds, DataCostKind::log2_correction) == 1.0);
  CHECK(data_cost(exact, ds, DataCostKind::mae) == 0.0);

  // errors {0, 1, 3}
  Dataset four({0, 1, 2, 3});
  SegmentIndex off({{0, 3, 0.0, 0.0, 0, 3}}, 3, PlaAlgorithm::optimal, 4);
  std::vector<KeyPositionPair> p{{0, 0}, {1, 1}, {3, 3}};
  auto s = kernels::error_stats(off, std::span<const KeyPositionPair>(p));
  CHECK(s.mae() == doctest::Approx(4.0 / 3));
  SegmentIndex four_off({{0, 3, 0.0, 4.0, 0, 3}}, 3, PlaAlgorithm::optimal, 10);
  std::vector<KeyPositionPair> one{{0, 0}};
  CHECK(kernels::error_stats(four_off, std::span<const KeyPositionPair>(one)).mean_log2_cost() == 3.0);
}

TEST_CASE("model cost") {
  auto idx = three_segments();
  CHECK(model_cost(idx, ModelCostKind::param_count) == 9);
  CHECK(model_cost(idx, ModelCostKind::size_bytes) == static_cast<double>(encode_index(idx).size()));

  std::vector<KeyPositionPair> p{{0, 0}, {1000, 1}};
  auto rmi = fit_rmi(p, 50);
  REQUIRE(rmi.untrained_count() > 0);
  CHECK(model_cost(rmi, ModelCostKind::param_count) == 2 + 2 * 50);
  CHECK_THROWS(model_cost(rmi, ModelCostKind::predict_time_ns));
}

TEST_CASE("config validation and parsing") {
  MdlConfig c;
  c.alpha = 0;
  CHECK_NOTHROW(validate(c));
  c.alpha = -1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = {};
  c.query_sample_size = 0;  // timing off
  CHECK_NOTHROW(validate(c));
  c.repetitions = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  CHECK(parse_model_cost_kind("size-bytes") == ModelCostKind::size_bytes);
  CHECK(parse_data_cost_kind("mae") == DataCostKind::mae);
  CHECK_THROWS_AS(parse_data_cost_kind("l1"), std::invalid_argument);
}

TEST_CASE("mdl report") {
  auto ds = generate_synthetic({SyntheticKind::piecewise_linear, 50000, 30, 20, 5});
  auto pairs = ds.pairs();
  MdlConfig cfg;
  cfg.query_sample_size = 2000;
  cfg.repetitions = 3;

  auto a = fit_optimal_pla(pairs, 8);
  auto b = fit_optimal_pla(pairs, 256);
  auto ra = mdl_score(a, ds, cfg);
  auto rb = mdl_score(b, ds, cfg);
  CHECK(ra.l_model >= rb.l_model);
  CHECK(ra.l_data <= rb.l_data);
  CHECK(ra.mdl == doctest::Approx(ra.l_model + ra.l_data));
  CHECK(ra.method == "optimal");
  CHECK(ra.model_count == a.segment_count());
  CHECK(ra.index_size_bytes == encode_index(a).size());
  CHECK(ra.total_size_bytes == ra.index_size_bytes + 16 * ds.size());
  CHECK(ra.max_error <= 8);
  CHECK(ra.status == "ok");
  CHECK(ra.overall_ns >= 0);

  cfg.alpha = 0;
  CHECK(mdl_score(a, ds, cfg).mdl == ra.l_model);

  double prev = -1;
  for (double alpha : {0.1, 1.0, 10.0}) {
    cfg.alpha = alpha;
    auto r = mdl_score(a, ds, cfg);
    CHECK(r.mdl >= prev);
    prev = r.mdl;
  }
}

TEST_CASE("query sampling and timing") {
  auto ds = generate_synthetic({SyntheticKind::lognormal, 10000, 0, 0, 1});
  CHECK(sample_query_keys(ds, 500, 4) == sample_query_keys(ds, 500, 4));
  for (Key k : sample_query_keys(ds, 500, 4)) CHECK(ds.rank_of(k).has_value());

  auto t = measure_query_times(BaselineIndex::binary_search(ds.size()), ds, 1000, 2, 3);
  CHECK(t.all_correct);
  CHECK(t.queries == 1000);
  CHECK(t.predict_median >= 0);
  CHECK(t.overall_median >= 0);

  // probe counts grow with log2(n)
  auto small = generate_synthetic({SyntheticKind::lognormal, 1000, 0, 0, 1});
  auto big = generate_synthetic({SyntheticKind::lognormal, 1000000, 0, 0, 1});
  auto ps = measure_query_times(BaselineIndex::binary_search(small.size()), small, 2000, 1, 1).mean_probes;
  auto pb = measure_query_times(BaselineIndex::binary_search(big.size()), big, 2000, 1, 1).mean_probes;
  CHECK(ps <= 11);
  CHECK(ps >= 8);
  CHECK(pb <= 21);
  CHECK(pb >= 18);
}
