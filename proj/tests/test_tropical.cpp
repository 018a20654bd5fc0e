#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <functional>
#include <numeric>

#include "hybrid_jacobi/tropical.hpp"
#include "hybrid_jacobi/verify.hpp"

using namespace hybrid_jacobi;

namespace {

MetricGraph loop_graph(Rational length) { return MetricGraph::build({"v"}, {{"e", "v", "v", std::move(length)}}); }

MetricGraph segment(Rational length) { return MetricGraph::build({"v1", "v2"}, {{"e", "v1", "v2", std::move(length)}}); }

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Weighted matrix-tree count by brute force: the Gram determinant of the
// fundamental cycles equals the sum over spanning trees T of the product of
// the lengths of the edges outside T.
Rational spanning_tree_sum(const MetricGraph& g) {
  const std::size_t n = g.vertex_count();
  const std::size_t m = g.edge_count();
  Rational total = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n - 1) continue;
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    bool forest = true;
    Rational outside = 1;
    for (std::size_t e = 0; e < m; ++e) {
      if (mask & (1u << e)) {
        const std::size_t a = find_root(parent, g.edge(e).tail);
        const std::size_t b = find_root(parent, g.edge(e).head);
        if (a == b) forest = false;
        parent[a] = b;
      } else {
        outside *= g.edge(e).length;
      }
    }
    if (forest) total += outside;
  }
  return total;
}

TropicalDivisor td(std::initializer_list<std::pair<GraphPlace, std::int64_t>> terms) {
  TropicalDivisor d;
  for (const auto& [p, c] : terms) d.add(p, c);
  return d;
}

bool integral_vector(const VectorQ& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!is_integer(x(i))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("period matrices") {
  const PeriodData loop = period_matrix(loop_graph(Rational(7, 3)));
  REQUIRE(loop.gram.rows() == 1);
  CHECK(loop.gram(0, 0) == Rational(7, 3));

  const MetricGraph theta = verify::fixture_theta();
  const PeriodData pd = period_matrix(theta);
  REQUIRE(pd.gram.rows() == 2);
  CHECK(pd.gram(0, 0) == 2);
  CHECK(pd.gram(0, 1) == 1);
  CHECK(pd.gram(1, 0) == 1);
  CHECK(pd.gram(1, 1) == 2);
  CHECK(linalg::determinant<Rational>(pd.gram) == 3);
  CHECK(spanning_tree_sum(theta) == 3);

  const PeriodData tree = period_matrix(segment(Rational(2)));
  CHECK(tree.gram.rows() == 0);
  CHECK(tree.gram.cols() == 0);
}

TEST_CASE("Gram determinant matches two independent spanning-tree oracles") {
  verify::Rng rng(17);
  verify::InstanceSeed s;
  s.max_vertices = 5;
  s.max_edges = 8;
  for (int k = 0; k < 30; ++k) {
    const MetricGraph g = verify::random_graph(rng, s);
    const PeriodData pd = period_matrix(g);
    const Rational det = pd.gram.rows() == 0 ? Rational(1) : linalg::determinant<Rational>(pd.gram);
    CHECK(det == spanning_tree_sum(g));
    CHECK(det == verify::matrix_tree_oracle(g));
  }
}

TEST_CASE("Abel-Jacobi coordinates") {
  const MetricGraph theta = verify::fixture_theta();
  const PeriodData pd = period_matrix(theta);
  const GraphPlace u = GraphPlace::at_vertex(0);
  CHECK(aj_tropical(theta, pd, TropicalDivisor{}, u).isZero());

  const VectorQ x = aj_tropical(theta, pd, td({{GraphPlace::on_edge(theta, 1, Rational(1, 2)), 1}, {u, -1}}), u);
  REQUIRE(x.size() == 2);
  CHECK(x(0) == Rational(1, 2));
  CHECK(x(1) == 0);

  const MetricGraph loop = loop_graph(Rational(1));
  const PeriodData lp = period_matrix(loop);
  for (const Rational t : {Rational(1, 3), Rational(1, 2), Rational(9, 10)}) {
    const VectorQ y = aj_tropical(loop, lp, td({{GraphPlace::on_edge(loop, 0, t), 1}, {GraphPlace::at_vertex(0), -1}}),
                                  GraphPlace::at_vertex(0));
    CHECK(y(0) == t);
  }
}

TEST_CASE("degree-zero images do not depend on the basepoint") {
  verify::Rng rng(23);
  verify::InstanceSeed s;
  for (int k = 0; k < 25; ++k) {
    const MetricGraph g = verify::random_graph(rng, s);
    const PeriodData pd = period_matrix(g);
    if (pd.basis.size() == 0) continue;
    const TropicalDivisor d = verify::random_tropical_divisor(rng, g, s);
    const auto e = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(g.edge_count()) - 1));
    const GraphPlace other = GraphPlace::on_edge(g, e, g.edge(e).length / 3);
    const VectorQ diff = aj_tropical(g, pd, d, GraphPlace::at_vertex(0)) - aj_tropical(g, pd, d, other);
    CHECK(integral_vector(linalg::solve_unique<Rational>(pd.gram, diff)));
  }
}

TEST_CASE("principality on small graphs") {
  const MetricGraph theta = verify::fixture_theta();
  const PeriodData pd = period_matrix(theta);

  const TropicalVerdict zero = is_principal_tropical(theta, pd, TropicalDivisor{});
  CHECK(zero.principal);
  CHECK(divisor_of_pl(zero.witness).empty());

  const MetricGraph loop = loop_graph(Rational(1));
  const PeriodData lp = period_matrix(loop);
  const TropicalDivisor third = td({{GraphPlace::on_edge(loop, 0, Rational(1, 3)), 1}, {GraphPlace::at_vertex(0), -1}});
  CHECK_FALSE(principal_by_lattice(loop, lp, third, NumericMode::exact()));
  PLFunction potentials;
  CHECK_FALSE(principal_by_laplacian(loop, third, NumericMode::exact(), &potentials));
  CHECK_FALSE(potentials.has_integer_slopes());
  CHECK_FALSE(is_principal_tropical(loop, lp, third).principal);

  const TropicalDivisor mids = td({{GraphPlace::on_edge(theta, 1, Rational(1, 2)), 1},
                                   {GraphPlace::on_edge(theta, 2, Rational(1, 2)), 1},
                                   {GraphPlace::at_vertex(0), -2}});
  const TropicalVerdict v = is_principal_tropical(theta, pd, mids);
  CHECK_FALSE(v.principal);
  REQUIRE(v.lattice_coordinates.size() == 2);
  CHECK(v.lattice_coordinates(0) == Rational(1, 6));
  CHECK(v.lattice_coordinates(1) == Rational(1, 6));
  CHECK_FALSE(v.reason.empty());

  // On a tree every degree-zero divisor is principal.
  const MetricGraph seg = segment(Rational(5, 2));
  const TropicalDivisor ends = td({{GraphPlace::at_vertex(0), 1}, {GraphPlace::on_edge(seg, 0, Rational(1, 7)), -1}});
  const TropicalVerdict tv = is_principal_tropical(seg, period_matrix(seg), ends);
  CHECK(tv.principal);
  CHECK(divisor_of_pl(tv.witness) == ends);
}

TEST_CASE("divisors of piecewise-linear functions") {
  const MetricGraph seg = segment(Rational(1));
  CHECK(divisor_of_pl(PLFunction::constant(seg, Rational(4))).empty());

  const PLFunction ramp = PLFunction::from_breakpoints(seg, {{GraphPlace::at_vertex(0), Rational(0)}, {GraphPlace::at_vertex(1), Rational(1)}});
  CHECK(divisor_of_pl(ramp) == td({{GraphPlace::at_vertex(0), 1}, {GraphPlace::at_vertex(1), -1}}));
  CHECK(ramp.outgoing_slope(EdgeSlot{0, End::Tail}) == 1);
  CHECK(ramp.outgoing_slope(EdgeSlot{0, End::Head}) == -1);

  const MetricGraph loop = loop_graph(Rational(2));
  const GraphPlace mid = GraphPlace::on_edge(loop, 0, Rational(1));
  const PLFunction tent = PLFunction::from_breakpoints(loop, {{GraphPlace::at_vertex(0), Rational(0)}, {mid, Rational(1)}});
  CHECK(divisor_of_pl(tent) == td({{GraphPlace::at_vertex(0), 2}, {mid, -2}}));

  const MetricGraph long_seg = segment(Rational(2));
  const PLFunction half = PLFunction::from_breakpoints(long_seg, {{GraphPlace::at_vertex(0), Rational(0)}, {GraphPlace::at_vertex(1), Rational(1)}});
  try {
    divisor_of_pl(half);
    FAIL("expected NonIntegerSlope");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonIntegerSlope);
  }
}

TEST_CASE("divisors of functions have degree zero and are principal with a sound witness") {
  verify::Rng rng(29);
  verify::InstanceSeed s;
  for (int k = 0; k < 30; ++k) {
    const MetricGraph g = verify::random_graph(rng, s);
    const PLFunction f = verify::random_pl_function(rng, g, s);
    const TropicalDivisor d = divisor_of_pl(f);
    CHECK(d.degree() == 0);
    const TropicalVerdict v = is_principal_tropical(g, period_matrix(g), d);
    CHECK(v.principal);
    CHECK(divisor_of_pl(v.witness) == d);
    // The witness differs from f by a constant.
    CHECK(same_function(g, shift(v.witness, f.value_at(GraphPlace::at_vertex(0)) - v.witness.value_at(GraphPlace::at_vertex(0))), f));
  }
}

TEST_CASE("function arithmetic") {
  const MetricGraph loop = loop_graph(Rational(2));
  const GraphPlace mid = GraphPlace::on_edge(loop, 0, Rational(1));
  const PLFunction tent = PLFunction::from_breakpoints(loop, {{GraphPlace::at_vertex(0), Rational(0)}, {mid, Rational(1)}});
  const PLFunction twice = add(loop, tent, tent);
  CHECK(same_function(loop, twice, scale(tent, Rational(2))));
  CHECK(twice.value_at(GraphPlace::on_edge(loop, 0, Rational(1, 2))) == 1);
  CHECK(shift(tent, Rational(3)).value_at(mid) == 4);
  const std::vector<GraphPlace> extra{GraphPlace::on_edge(loop, 0, Rational(1, 3))};
  CHECK(same_function(loop, resample(loop, tent, extra), tent));
}
