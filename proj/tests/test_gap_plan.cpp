#include "doctest.h"
#include "gapidx/gap_plan.hpp"
#include "gapidx/sampling.hpp"
#include "gapidx/synthetic.hpp"

using namespace gapidx;

TEST_CASE("one segment stretched by two") {
  std::vector<KeyPositionPair> d{{0, 0}, {2, 1}, {4, 2}};
  auto seg = fit_optimal_pla(d, 0);
  REQUIRE(seg.segment_count() == 1);
  auto plan = plan_gaps(seg, d, 1.0);
  CHECK(plan.targets == std::vector<double>{0, 2, 4});
  CHECK(plan.segment_gaps == std::vector<std::int64_t>{2});
  CHECK(plan.slot_count() == 5);
  CHECK(plan.rounded_pairs() == std::vector<KeyPositionPair>{{0, 0}, {2, 2}, {4, 4}});
}

TEST_CASE("two segments with a carried gap prefix") {
  std::vector<KeyPositionPair> d{{0, 0}, {1, 1}, {2, 2}, {10, 3}, {11, 4}};
  SegmentIndex seg({{0, 2, 1, 0, 0, 2}, {10, 11, 1, 3, 3, 4}}, 0, PlaAlgorithm::optimal, 5);
  auto plan = plan_gaps(seg, d, 0.5);
  CHECK(plan.segment_gaps == std::vector<std::int64_t>{1, 1});  // round(0.5 * 2), round(0.5 * 1)
  REQUIRE(plan.targets.size() == 5);
  CHECK(plan.targets[0] == 0);
  CHECK(plan.targets[1] == doctest::Approx(1.5));
  CHECK(plan.targets[2] == 3);
  CHECK(plan.targets[3] == 4);
  CHECK(plan.targets[4] == 5.5);
  REQUIRE(plan.anchors.size() == 2);
  CHECK(plan.anchors[1].first_target == 4);
  CHECK(plan.anchors[1].last_target == 5.5);
  CHECK(plan.slot_count() == 7);
}

TEST_CASE("rho zero is the identity") {
  auto ds = generate_synthetic({SyntheticKind::lognormal, 20000, 0, 0, 3});
  auto s = sample_uniform(ds, {0.1, 2});
  auto seg = fit_optimal_pla(s.pairs, 16, 20000);
  auto plan = plan_gaps(seg, s.pairs, 0.0);
  REQUIRE(plan.targets.size() == s.pairs.size());
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    CHECK(plan.keys[i] == s.pairs[i].key);
    CHECK(plan.targets[i] == static_cast<double>(s.pairs[i].position));
  }
  CHECK(plan.total_gaps() == 0);
  CHECK(plan.rounded_pairs() == s.pairs);
}

TEST_CASE("targets strictly increase and stay within budget") {
  for (auto kind : {SyntheticKind::lognormal, SyntheticKind::piecewise_linear, SyntheticKind::staircase}) {
    auto ds = generate_synthetic({kind, 30000, 25, 12, 8});
    for (double rate : {1.0, 0.1}) {
      auto s = sample_uniform(ds, {rate, 1});
      for (std::int64_t eps : {2, 64}) {
        auto seg = fit_greedy_cone(s.pairs, eps, 30000);
        for (double rho : {0.0, 0.1, 0.5, 1.0, 3.0}) {
          auto plan = plan_gaps(seg, s.pairs, rho);
          CAPTURE(rho);
          for (std::size_t i = 1; i < plan.targets.size(); ++i) CHECK(plan.targets[i - 1] < plan.targets[i]);
          auto r = plan.rounded_pairs();
          for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i - 1].position <= r[i].position);
          CHECK(static_cast<double>(plan.total_gaps()) <=
                rho * static_cast<double>(ds.size()) + static_cast<double>(plan.anchors.size()));
          CHECK(plan.anchors.size() <= seg.segment_count());
        }
      }
    }
  }
}

TEST_CASE("plan errors") {
  std::vector<KeyPositionPair> d{{0, 0}, {1, 1}};
  auto seg = fit_optimal_pla(d, 0);
  std::vector<KeyPositionPair> empty;
  std::vector<KeyPositionPair> unsorted{{1, 0}, {0, 1}};
  CHECK_THROWS_AS(plan_gaps(seg, d, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(plan_gaps(seg, empty, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(plan_gaps(seg, unsorted, 0.5), std::invalid_argument);
}
