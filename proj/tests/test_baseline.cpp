#include "doctest.h"
#include "gapidx/index.hpp"
#include "gapidx/synthetic.hpp"

using namespace gapidx;

TEST_CASE("binary-search baseline covers the whole array") {
  auto b = BaselineIndex::binary_search(101);
  auto g = b.predict(12345);
  CHECK(g.value == 50);
  CHECK(g.lo == 0);
  CHECK(g.hi == 100);
  CHECK(param_count(AnyIndex(b)) == 0);
  CHECK(method_name(AnyIndex(b)) == "binary");
}

TEST_CASE("B+ tree descent lands on the key's page") {
  auto ds = generate_synthetic({SyntheticKind::lognormal, 10000, 0, 0, 9});
  for (std::size_t page : {1u, 8u, 128u}) {
    for (std::size_t fanout : {2u, 16u}) {
      auto t = BaselineIndex::btree(ds.keys(), page, fanout);
      CHECK(t.levels().front().size() == (ds.size() + page - 1) / page);
      CHECK(param_count(AnyIndex(t)) == t.separator_count());
      for (std::size_t i = 0; i < ds.size(); i += 37) {
        auto g = t.predict(ds[i]);
        auto y = static_cast<Position>(i);
        CHECK(g.lo <= y);
        CHECK(y <= g.hi);
        CHECK(g.hi - g.lo + 1 <= static_cast<Position>(page));
        CHECK(g.lo % static_cast<Position>(page) == 0);
      }
      CHECK(has_exact_bounds(AnyIndex(t)));
    }
  }
}
