#include <random>

#include "doctest.h"
#include "gapidx/kernels.hpp"
#include "gapidx/sampling.hpp"
#include "gapidx/synthetic.hpp"

using namespace gapidx;

TEST_CASE("uniform sample size, extremes and determinism") {
  Dataset ten({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  for (std::uint64_t seed : {0u, 1u, 77u}) {
    auto s = sample_uniform(ten, {0.5, seed});
    REQUIRE(s.pairs.size() == 5);
    CHECK(s.pairs.front().position == 0);
    CHECK(s.pairs.back().position == 9);
    CHECK(s.source_n == 10);
    for (std::size_t i = 1; i < s.pairs.size(); ++i) CHECK(s.pairs[i - 1].position < s.pairs[i].position);
    for (const auto& p : s.pairs) CHECK(ten[static_cast<std::size_t>(p.position)] == p.key);
  }
  auto all = sample_uniform(ten, {1.0, 3});
  CHECK(all.pairs == ten.pairs());
  CHECK(sample_uniform(ten, {0.01, 3}).pairs.size() == 2);

  auto ds = generate_synthetic({SyntheticKind::lognormal, 10000, 0, 0, 3});
  CHECK(sample_uniform(ds, {0.1, 5}).pairs == sample_uniform(ds, {0.1, 5}).pairs);
  CHECK(sample_uniform(ds, {0.1, 5}).pairs != sample_uniform(ds, {0.1, 6}).pairs);
  CHECK_THROWS_AS(sample_uniform(ds, {0.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(sample_uniform(Dataset({4}), {1.0, 1}), std::invalid_argument);
}

TEST_CASE("sample indices are uniform") {
  // each of 20 indices drawn 5 at a time should appear about 25% of the time
  std::vector<int> hits(20, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t)
    for (auto i : sample_indices(20, 5, static_cast<std::uint64_t>(t))) ++hits[i];
  for (int h : hits) CHECK(std::abs(h / double(trials) - 0.25) < 0.02);
}

TEST_CASE("connector segments") {
  SegmentIndex two({{0, 10, 0.5, 0, 0, 5}, {20, 30, 0.5, 9, 9, 14}}, 1, PlaAlgorithm::optimal, 15);
  auto patched = patch_connect_segments(two, 0, 30);
  REQUIRE(patched.segment_count() == 3);
  const auto& c = patched.segments()[1];
  CHECK(c.slope == doctest::Approx(0.4));
  CHECK(c.first_key == 11);
  CHECK(c.last_key == 19);
  // the line through (10, 5) and (20, 9)
  for (Key k = 11; k < 20; ++k) CHECK(c.eval(k) == doctest::Approx(5 + 0.4 * static_cast<double>(k - 10)));

  SegmentIndex one({{5, 10, 1, 0, 0, 5}}, 1, PlaAlgorithm::optimal, 20);
  auto widened = patch_connect_segments(one, 0, 100);
  REQUIRE(widened.segment_count() == 1);
  CHECK(widened.segments()[0].first_key == 0);
  CHECK(widened.segments()[0].eval(5) == doctest::Approx(0));
  CHECK(patch_connect_segments(one, 5, 10) == one);
}

TEST_CASE("patched segments cover the whole key range") {
  auto ds = generate_synthetic({SyntheticKind::piecewise_linear, 50000, 50, 30, 2});
  auto s = sample_uniform(ds, {0.02, 9});
  auto idx = patch_connect_segments(fit_optimal_pla(s.pairs, 4, 50000), ds.keys().front(), ds.keys().back());
  auto segs = idx.segments();
  CHECK(segs.front().first_key == ds.keys().front());
  CHECK(segs.back().last_key == ds.keys().back());
  for (std::size_t i = 1; i < segs.size(); ++i) CHECK(segs[i].first_key == segs[i - 1].last_key + 1);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Key> d(ds.keys().front(), ds.keys().back());
  for (int t = 0; t < 20000; ++t) {
    Key k = d(rng);
    auto id = idx.find_segment(k);
    CHECK(segs[id].first_key <= k);
    CHECK(k <= segs[id].last_key);
    auto g = idx.predict(k);
    CHECK(g.value >= 0);
    CHECK(g.value < 50000);
  }
}

TEST_CASE("rmi nearest-seg patch") {
  auto leaf = [](double slope, bool trained) {
    RmiLeaf l;
    l.model = {0, slope, 0};
    l.trained = trained;
    l.max_positive_error = trained ? static_cast<std::int64_t>(slope) : 0;
    return l;
  };
  RmiIndex a({0, 0.001, 0}, {leaf(1, true), leaf(0, false), leaf(3, true)}, 100);
  auto pa = patch_rmi_nearest_seg(a);
  CHECK(pa.leaves()[1].model.slope == 1);
  CHECK(pa.leaves()[1].max_positive_error == 1);
  CHECK_FALSE(pa.leaves()[1].trained);

  RmiIndex b({0, 0.001, 0}, {leaf(1, true), leaf(0, false), leaf(0, false), leaf(4, true)}, 100);
  auto pb = patch_rmi_nearest_seg(b);
  CHECK(pb.leaves()[1].model.slope == 1);
  CHECK(pb.leaves()[2].model.slope == 4);

  RmiIndex c({0, 0.001, 0}, {leaf(1, true), leaf(2, true)}, 100);
  CHECK(patch_rmi_nearest_seg(c) == c);
}

TEST_CASE("guideline sample size") {
  CHECK(guideline_sample_size(2, 256) == 256);
  CHECK(guideline_sample_size(2, 1) == 64);
  CHECK(guideline_sample_size(8, 256, 1, 0) == 4 * guideline_sample_size(4, 256, 1, 0));
  CHECK_THROWS_AS(guideline_sample_size(1, 0), std::invalid_argument);
}

TEST_CASE("method names") {
  CHECK(parse_learn_method("greedy") == LearnMethod::greedy);
  CHECK(parse_learn_method("pgm") == LearnMethod::optimal);
  CHECK(parse_learn_method("rmi") == LearnMethod::rmi);
  CHECK_THROWS_AS(parse_learn_method("alex"), std::invalid_argument);
}

TEST_CASE("learning from samples") {
  auto ds = generate_synthetic({SyntheticKind::piecewise_linear, 100000, 20, 15, 4});
  auto pairs = ds.pairs();

  SUBCASE("rate 1 equals a direct fit") {
    auto s = learn_with_sampling(ds, {1.0, 1}, LearnMethod::optimal, {32, 0});
    CHECK(std::get<SegmentIndex>(s.index) == fit_optimal_pla(pairs, 32));
    CHECK(has_exact_bounds(s.index));
    CHECK(s.sample_size == ds.size());
    auto r = learn_with_sampling(ds, {1.0, 1}, LearnMethod::rmi, {0, 500});
    CHECK(std::get<RmiIndex>(r.index) == fit_rmi(pairs, 500));
  }

  SUBCASE("linear data has zero error at any rate") {
    auto lin = generate_synthetic({SyntheticKind::linear, 50000, 0, 0, 4});
    for (double rate : {1.0, 0.1, 0.01}) {
      for (auto m : {LearnMethod::greedy, LearnMethod::optimal}) {
        auto s = learn_with_sampling(lin, {rate, 2}, m, {8, 0});
        CHECK(kernels::error_stats(s.index, lin.keys()).max_abs == 0);
      }
    }
  }

  SUBCASE("every key is found at every rate and method") {
    for (double rate : {1.0, 0.1, 0.01}) {
      for (auto m : {LearnMethod::greedy, LearnMethod::optimal, LearnMethod::rmi}) {
        auto s = learn_with_sampling(ds, {rate, 3}, m, {16, 200});
        CAPTURE(rate);
        CHECK(has_exact_bounds(s.index) == (rate == 1.0));
        auto st = kernels::verify_lookups(s.index, ds.keys(), ds.keys());
        CHECK(st.correct == ds.size());
      }
    }
  }

  SUBCASE("fewer segments from a sample on noisy data") {
    auto full = learn_with_sampling(ds, {1.0, 5}, LearnMethod::optimal, {8, 0});
    auto part = learn_with_sampling(ds, {0.01, 5}, LearnMethod::optimal, {8, 0});
    CHECK(part.fitted_model_count <= full.fitted_model_count);
  }
}

TEST_CASE("hoeffding check") {
  auto ds = generate_synthetic({SyntheticKind::lognormal, 20000, 0, 0, 6});
  auto idx = AnyIndex(fit_optimal_pla(ds.pairs(), 32));

  auto r = check_hoeffding_bound(ds, idx, 1000, 0.05, 50, 1);
  CHECK(r.trials == 50);
  CHECK(r.deviations.size() == 50);
  CHECK(r.violations <= r.trials);
  CHECK(r.max_error == max_abs_error(idx, ds.pairs()));
  CHECK(r.bound == doctest::Approx(std::log2(double(r.max_error)) / std::sqrt(2.0 * 1000) *
                                   std::sqrt(std::log(2 / 0.05))));

  auto full = check_hoeffding_bound(ds, idx, ds.size(), 0.05, 5, 1);
  CHECK(full.violations == 0);
  for (double d : full.deviations) CHECK(d == doctest::Approx(0).epsilon(1e-9));

  // every key predicted exactly -> constant per-key loss
  auto exact = AnyIndex(fit_optimal_pla(ds.pairs(), 0));
  auto z = check_hoeffding_bound(ds, exact, 100, 0.05, 20, 2);
  CHECK(z.violations == 0);

  CHECK(check_hoeffding_bound(ds, idx, 1000, 0.05, 50, 1).deviations == r.deviations);
}
