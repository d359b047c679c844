#include "gapidx/index.hpp"

#include <cstdlib>

namespace gapidx {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string method_name(const AnyIndex& index) {
  return std::visit(overloaded{
                        [](const SegmentIndex& s) { return std::string(to_string(s.algorithm())); },
                        [](const RmiIndex&) { return std::string("rmi"); },
                        [](const BaselineIndex& b) {
                          return std::string(b.kind() == BaselineKind::btree ? "btree" : "binary");
                        },
                    },
                    index);
}

std::string param_summary(const AnyIndex& index) {
  return std::visit(overloaded{
                        [](const SegmentIndex& s) { return "eps=" + std::to_string(s.epsilon()); },
                        [](const RmiIndex& r) { return "leaves=" + std::to_string(r.leaf_count()); },
                        [](const BaselineIndex& b) {
                          return b.kind() == BaselineKind::btree
                                     ? "page=" + std::to_string(b.page_size()) + ";fanout=" +
                                           std::to_string(b.fanout())
                                     : std::string("-");
                        },
                    },
                    index);
}

std::size_t param_count(const AnyIndex& index) {
  return std::visit(overloaded{
                        [](const SegmentIndex& s) { return 3 * s.segment_count(); },
                        [](const RmiIndex& r) { return 2 + 2 * r.leaf_count(); },
                        [](const BaselineIndex& b) { return b.separator_count(); },
                    },
                    index);
}

std::size_t model_count(const AnyIndex& index) {
  return std::visit(overloaded{
                        [](const SegmentIndex& s) { return s.segment_count(); },
                        [](const RmiIndex& r) { return r.leaf_count(); },
                        [](const BaselineIndex& b) { return b.separator_count(); },
                    },
                    index);
}

bool has_exact_bounds(const AnyIndex& index) {
  return std::visit(overloaded{
                        [](const SegmentIndex& s) { return s.exact_bounds(); },
                        [](const RmiIndex& r) { return r.exact_bounds(); },
                        [](const BaselineIndex&) { return true; },
                    },
                    index);
}

SearchResult correct(const AnyIndex& index, std::span<const Key> keys, const PredictedPosition& guess,
                     Key key) noexcept {
  return has_exact_bounds(index) ? correct_binary(keys, guess, key) : correct_exponential(keys, guess, key);
}

std::int64_t max_abs_error(const AnyIndex& index, std::span<const KeyPositionPair> pairs) {
  return std::visit(
      [&](const auto& i) {
        std::int64_t e = 0;
        for (const auto& p : pairs) e = std::max<std::int64_t>(e, std::llabs(i.predict(p.key).value - p.position));
        return e;
      },
      index);
}

}  // namespace gapidx
