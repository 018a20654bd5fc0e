#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "hybrid_jacobi/tropical.hpp"
#include "hybrid_jacobi/verify.hpp"

using namespace hybrid_jacobi;

namespace {

using Side = ChipFiringMove::Side;

MetricGraph segment(Rational length) { return MetricGraph::build({"a", "b"}, {{"e", "a", "b", std::move(length)}}); }

PLFunction sum_of(const MetricGraph& g, const std::vector<ChipFiringMove>& moves) {
  PLFunction total = PLFunction::constant(g, Rational(0));
  for (const auto& m : moves) total = add(g, total, m.as_function());
  return total;
}

Rational minimum(const PLFunction& f) { return *std::min_element(f.values().begin(), f.values().end()); }

// A ramp from `low` at vertex a, flat until offset `start`, then slope
// (high - low) / (length - start) up to vertex b.
ChipFiringMove ramp(const MetricGraph& g, const Rational& start, const Rational& high) {
  ChipFiringMove m;
  const std::vector<GraphPlace> at{GraphPlace::on_edge(g, 0, start)};
  m.model = refine(g, at);
  m.low = 0;
  m.high = high;
  m.values = {Rational(0), high, Rational(0)};
  m.sides = {Side::Low, Side::High, Side::Low};
  return m;
}

}  // namespace

TEST_CASE("a single move decomposes to itself") {
  const MetricGraph g = segment(Rational(3));
  const PLFunction f = PLFunction::from_breakpoints(
      g, {{GraphPlace::at_vertex(0), Rational(0)}, {GraphPlace::on_edge(g, 0, Rational(1)), Rational(0)},
          {GraphPlace::on_edge(g, 0, Rational(2)), Rational(1)}, {GraphPlace::at_vertex(1), Rational(1)}});
  const auto moves = decompose_chip_firing(g, f);
  REQUIRE(moves.size() == 1);
  std::string why;
  CHECK_MESSAGE(moves[0].satisfies_invariants(&why), why);
  CHECK(same_function(g, moves[0].as_function(), f));
}

TEST_CASE("two-slope ramp on [0,3]") {
  const MetricGraph g = segment(Rational(3));
  const PLFunction f = PLFunction::from_breakpoints(
      g, {{GraphPlace::at_vertex(0), Rational(0)}, {GraphPlace::on_edge(g, 0, Rational(1)), Rational(0)},
          {GraphPlace::on_edge(g, 0, Rational(2)), Rational(1)}, {GraphPlace::at_vertex(1), Rational(3)}});
  const auto moves = decompose_chip_firing(g, f);
  CHECK(moves.size() == 2);
  for (const auto& m : moves) {
    std::string why;
    CHECK_MESSAGE(m.satisfies_invariants(&why), why);
  }
  CHECK(same_function(g, sum_of(g, moves), f));

  // The alternative split into ramps starting at 1 and at 2 is also a valid
  // pair of moves with the same sum.
  const std::vector<ChipFiringMove> alt{ramp(g, Rational(1), Rational(2)), ramp(g, Rational(2), Rational(1))};
  for (const auto& m : alt) CHECK(m.satisfies_invariants());
  CHECK(same_function(g, sum_of(g, alt), f));
}

TEST_CASE("constant functions need no moves") {
  const MetricGraph g = verify::fixture_theta();
  CHECK(decompose_chip_firing(g, PLFunction::constant(g, Rational(5, 2))).empty());
}

TEST_CASE("invariant checker rejects broken moves") {
  const MetricGraph g = segment(Rational(3));
  ChipFiringMove m = ramp(g, Rational(1), Rational(2));
  m.values[1] = Rational(3);
  CHECK_FALSE(m.satisfies_invariants());
  ChipFiringMove half = ramp(g, Rational(1), Rational(1));
  std::string why;
  CHECK_FALSE(half.satisfies_invariants(&why));
  CHECK(why.find("non-integer slope") != std::string::npos);
  ChipFiringMove flat = ramp(g, Rational(1), Rational(2));
  flat.high = Rational(0);
  CHECK_FALSE(flat.satisfies_invariants());
}

TEST_CASE("random functions decompose into valid moves summing to f minus its minimum") {
  verify::Rng rng(31);
  verify::InstanceSeed s;
  for (int k = 0; k < 40; ++k) {
    const MetricGraph g = verify::random_graph(rng, s);
    const PLFunction f = verify::random_pl_function(rng, g, s);
    const auto moves = decompose_chip_firing(g, f);
    for (const auto& m : moves) {
      std::string why;
      CHECK_MESSAGE(m.satisfies_invariants(&why), why);
    }
    CHECK(same_function(g, shift(sum_of(g, moves), minimum(f)), f));
  }
}

TEST_CASE("non-integer slopes are rejected") {
  const MetricGraph g = segment(Rational(2));
  const PLFunction f = PLFunction::from_breakpoints(g, {{GraphPlace::at_vertex(0), Rational(0)}, {GraphPlace::at_vertex(1), Rational(1)}});
  CHECK_THROWS_AS(decompose_chip_firing(g, f), Error);
}
