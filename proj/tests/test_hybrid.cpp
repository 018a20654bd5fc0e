#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hybrid_jacobi/hybrid.hpp"
#include "hybrid_jacobi/verify.hpp"

using namespace hybrid_jacobi;

namespace {

CVector c1(Rational re, Rational im = Rational(0)) { return {Complex(std::move(re), std::move(im))}; }

VertexSurface torus(std::map<EdgeSlot, CVector> marked) {
  VertexSurface s;
  s.genus = 1;
  s.lattice = {c1(Rational(1)), c1(Rational(0), Rational(1))};
  s.marked = std::move(marked);
  s.points["p"] = c1(Rational(0));
  return s;
}

// Theta graph with a square torus at both vertices.
MCRS theta_with_tori() {
  std::map<std::string, VertexSurface> s;
  s["u"] = torus({{EdgeSlot{0, End::Tail}, c1(Rational(0))},
                  {EdgeSlot{1, End::Tail}, c1(Rational(1, 2))},
                  {EdgeSlot{2, End::Tail}, c1(Rational(0), Rational(1, 3))}});
  s["w"] = torus({{EdgeSlot{0, End::Head}, c1(Rational(1, 5))},
                  {EdgeSlot{1, End::Head}, c1(Rational(0))},
                  {EdgeSlot{2, End::Head}, c1(Rational(1, 7), Rational(1, 2))}});
  return build_mcrs(verify::fixture_theta(), std::move(s));
}

HybridPlace named(const MCRS& m, const char* vertex, const char* name) {
  return HybridPlace::surface_point(m.graph.vertex_index(vertex), SurfacePointRef::named(name));
}

HybridDivisor difference(const HybridPlace& a, const HybridPlace& b) {
  HybridDivisor d;
  d.add(a, 1);
  d.add(b, -1);
  return d;
}

bool integral(const VectorQ& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!is_integer(x(i))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("lattice of a single torus") {
  VertexSurface t = torus({});
  const MCRS m = build_mcrs(MetricGraph::build({"x"}, {}), {{"x", t}});
  const HybridLattice l = hybrid_lattice(m);
  REQUIRE(l.generators.size() == 2);
  CHECK(l.surface_generator_count == 2);
  CHECK(l.generators[0].blocks[0] == c1(Rational(1)));
  CHECK(l.generators[1].blocks[0] == c1(Rational(0), Rational(1)));
  CHECK(l.generators[0].gamma.size() == 0);
  CHECK(homology_rank(m) == 2);

  const MCRS sphere = build_mcrs(MetricGraph::build({"x"}, {}), {{"x", VertexSurface{}}});
  CHECK(homology_rank(sphere) == 0);
}

TEST_CASE("lattice of the torus with a loop") {
  const Complex w(Rational(1, 3), Rational(1, 5));
  const MCRS m = verify::fixture_loop(w);
  const HybridLattice l = hybrid_lattice(m);
  REQUIRE(l.generators.size() == 3);
  CHECK(l.generators[0].blocks[0] == c1(Rational(1)));
  CHECK(l.generators[0].gamma(0) == 0);
  CHECK(l.generators[1].blocks[0] == c1(Rational(0), Rational(1)));
  // The cycle leaves through the tail slot and comes back through the head
  // slot: mu(tail) - mu(head) = -w, with one full turn of the loop.
  const HybridCoordinates& h = l.cycle_lift(0);
  CHECK(h.blocks[0] == CVector{-w});
  CHECK(h.gamma(0) == 1);
  CHECK(homology_rank(m) == 3);

  // Cross-check the sign with a tent function on the loop: its divisor has
  // zero image, and so does its first-order part once the cycle is removed.
  HybridDivisor tent;
  tent.add(HybridPlace::marked_point(m.graph, EdgeSlot{0, End::Tail}), 1);
  tent.add(HybridPlace::marked_point(m.graph, EdgeSlot{0, End::Head}), 1);
  tent.add(HybridPlace::on_edge(m.graph, 0, Rational(1, 2)), -2);
  const HybridCoordinates a = aj_hybrid(m, tent);
  CHECK(a.gamma(0) == -1);
  CHECK(a.blocks[0] == CVector{w});
  CHECK((a + h).is_zero());
}

TEST_CASE("ranks of the figure complex and of the theta complex") {
  const MCRS fig = verify::fixture_fig1();
  CHECK(fig.genus == 3);
  CHECK(homology_rank(fig) == 5);
  CHECK(linalg::rank<Rational>(hybrid_lattice(fig).matrix()) == 5);
  CHECK(homology_rank(theta_with_tori()) == 6);
}

TEST_CASE("cycle generator of the figure complex by hand") {
  const MCRS m = verify::fixture_fig1();
  const HybridLattice l = hybrid_lattice(m);
  REQUIRE(l.generators.size() == 5);
  const HybridCoordinates& h = l.cycle_lift(0);
  // Tree e1, e2, e3 from v1; the cycle of e4 runs v1 -> v2 -> v3 -> v4 -> v1
  // crossing X_v1 (out at e1, in at e4), X_v3 (in at e2, out at e3).
  CHECK(h.gamma(0) == 4);
  CHECK(h.blocks[0] == c1(Rational(1, 4), Rational(-1, 3)));
  CHECK(h.blocks[2] == c1(Rational(-3, 10), Rational(1, 7)));
  CHECK(h.blocks[1].empty());
  CHECK(h.blocks[3].empty());
}

TEST_CASE("Abel-Jacobi images") {
  const MCRS edge = verify::fixture_edge();
  CHECK(aj_hybrid(edge, difference(named(edge, "v1", "p"), named(edge, "v1", "p"))).is_zero());

  const HybridCoordinates ab = aj_hybrid(edge, difference(named(edge, "v1", "a"), named(edge, "v1", "b")));
  CHECK(ab.blocks[0] == c1(Rational(0), Rational(1)));
  CHECK(ab.blocks[1] == c1(Rational(0)));
  CHECK(ab.gamma.size() == 0);

  const MCRS loop = verify::fixture_loop();
  for (const Rational t : {Rational(1, 4), Rational(1, 2), Rational(5, 6)}) {
    const HybridCoordinates c = aj_hybrid(
        loop, difference(HybridPlace::on_edge(loop.graph, 0, t), HybridPlace::marked_point(loop.graph, EdgeSlot{0, End::Tail})));
    CHECK(c.gamma(0) == t);
    CHECK(c.blocks[0] == c1(Rational(0)));
  }
}

TEST_CASE("the images commute with taking graph parts and surface parts") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    verify::InstanceSeed s;
    s.seed = seed;
    const verify::RandomInstance inst = verify::random_instance(s);
    const MCRS& m = inst.complex;
    const Frame frame = default_frame(m);
    const PeriodData pd = period_matrix(m.graph, frame.basis);
    for (const auto& d : inst.divisors) {
      const HybridCoordinates c = aj_hybrid(m, frame, d);
      const VectorQ graph = aj_tropical(m.graph, pd, gamma_part(m, d), GraphPlace::at_vertex(frame.base_vertex));
      if (pd.gram.rows() > 0) CHECK(integral(linalg::solve_unique<Rational>(pd.gram, c.gamma - graph)));
    }
    // Vertex-supported pieces: surface blocks are the surface images, the
    // graph block is trivial.
    for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
      const auto& points = m.surface(v).points;
      if (points.size() < 2) continue;
      const HybridPlace first = HybridPlace::surface_point(v, SurfacePointRef::named(points.begin()->first));
      const HybridPlace last = HybridPlace::surface_point(v, SurfacePointRef::named(points.rbegin()->first));
      const HybridCoordinates c = aj_hybrid(m, frame, difference(first, last));
      CHECK(c.blocks[v] == points.begin()->second - points.rbegin()->second);
      CHECK(c.gamma.isZero());
    }
  }
}

TEST_CASE("principality on the edge fixture") {
  const MCRS m = verify::fixture_edge();
  for (const Algorithm alg : {Algorithm::Lattice, Algorithm::Proof, Algorithm::Both}) {
    const HybridVerdict yes = is_principal_hybrid(m, difference(named(m, "v1", "a"), named(m, "v1", "b")), alg);
    CHECK(yes.principal);
    const HybridVerdict no = is_principal_hybrid(m, difference(named(m, "v1", "a"), named(m, "v1", "sixth")), alg);
    CHECK_FALSE(no.principal);
    CHECK(no.reason == "surface block v1 residue not in lattice");
  }

  const HybridVerdict both = is_principal_hybrid(m, difference(named(m, "v1", "a"), named(m, "v1", "b")));
  REQUIRE(both.vertex_coordinates.size() == 2);
  CHECK(both.vertex_coordinates[0](0) == 0);
  CHECK(both.vertex_coordinates[0](1) == 1);

  const HybridDivisor ends = difference(HybridPlace::marked_point(m.graph, EdgeSlot{0, End::Tail}),
                                        HybridPlace::marked_point(m.graph, EdgeSlot{0, End::Head}));
  const HybridVerdict v = is_principal_hybrid(m, ends);
  CHECK(v.principal);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->outgoing_slope(EdgeSlot{0, End::Tail}) == 1);
  CHECK(divisor_of_pl(*v.witness) == gamma_part(m, ends));

  HybridDivisor unbalanced;
  unbalanced.add(named(m, "v1", "a"), 1);
  CHECK_THROWS_AS(is_principal_hybrid(m, unbalanced), Error);
}

TEST_CASE("principality in float mode") {
  const MCRS m = verify::fixture_edge();
  const NumericMode fl = NumericMode::floating();
  CHECK(is_principal_hybrid(m, difference(named(m, "v1", "a"), named(m, "v1", "b")), Algorithm::Both, fl).principal);
  CHECK_FALSE(is_principal_hybrid(m, difference(named(m, "v1", "a"), named(m, "v1", "sixth")), Algorithm::Both, fl).principal);
}

TEST_CASE("graph-part obstruction") {
  const MCRS m = verify::fixture_loop();
  const HybridDivisor d = difference(HybridPlace::on_edge(m.graph, 0, Rational(1, 3)),
                                     HybridPlace::marked_point(m.graph, EdgeSlot{0, End::Tail}));
  const HybridVerdict v = is_principal_hybrid(m, d);
  CHECK_FALSE(v.principal);
  CHECK(v.reason == "graph part not principal: Abel-Jacobi coordinates not in the period lattice");
}

TEST_CASE("divisors of hybrid functions are principal and both routes agree") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    verify::InstanceSeed s;
    s.seed = seed;
    const verify::RandomInstance inst = verify::random_instance(s);
    for (const auto& f : inst.functions) {
      const HybridDivisor d = divisor_of_hybrid(inst.complex, f);
      CHECK(lattice_membership(hybrid_lattice(inst.complex), aj_hybrid(inst.complex, d)).member);
      CHECK(is_principal_hybrid(inst.complex, d).principal);
    }
    for (const auto& pl : inst.pl_functions) {
      const HybridDivisor d = divisor_of_hybrid(inst.complex, extend_by_constants(inst.complex, pl));
      CHECK(lattice_membership(hybrid_lattice(inst.complex), aj_hybrid(inst.complex, d)).member);
    }
  }
}

TEST_CASE("lifting graph divisors") {
  const MCRS m = verify::fixture_edge();
  CHECK(lift_divisor(m, TropicalDivisor{}).empty());
  TropicalDivisor d;
  d.add(GraphPlace::at_vertex(0), 1);
  d.add(GraphPlace::at_vertex(1), -1);
  CHECK(lift_divisor(m, d) == difference(named(m, "v1", "p"), named(m, "v2", "p")));
  CHECK(gamma_part(m, lift_divisor(m, d)) == d);

  // v1 - v2 is principal on the edge, but its lift is not: the only graph
  // function with that divisor is the unit ramp, which forces the class of
  // the basepoint minus the marked point at v1, and that point sits at 1/4.
  const PeriodData pd = period_matrix(m.graph, default_frame(m).basis);
  CHECK(is_principal_tropical(m.graph, pd, d).principal);
  for (const Algorithm alg : {Algorithm::Lattice, Algorithm::Proof, Algorithm::Both}) {
    CHECK_FALSE(is_principal_hybrid(m, lift_divisor(m, d), alg).principal);
  }
  HybridDivisor corrected = lift_divisor(m, d);
  corrected.add(named(m, "v1", "q"), 1);
  corrected.add(named(m, "v1", "p"), -1);
  CHECK(is_principal_hybrid(m, corrected).principal);

  TropicalDivisor mid;
  mid.add(GraphPlace::on_edge(m.graph, 0, Rational(1, 2)), 1);
  mid.add(GraphPlace::at_vertex(0), -1);
  const HybridDivisor lifted = lift_divisor(m, mid);
  CHECK(lifted[HybridPlace::on_edge(m.graph, 0, Rational(1, 2))] == 1);
  CHECK(gamma_part(m, lifted) == mid);

  VertexSurface no_base = torus({{EdgeSlot{0, End::Tail}, c1(Rational(0))}});
  no_base.points.clear();
  const MCRS bare = build_mcrs(m.graph, {{"v1", no_base}, {"v2", torus({{EdgeSlot{0, End::Head}, c1(Rational(0))}})}});
  try {
    lift_divisor(bare, d);
    FAIL("expected MissingBasepointPoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingBasepointPoint);
  }
}

TEST_CASE("Abel-Jacobi preimages") {
  const MCRS loop = verify::fixture_loop();
  const Frame frame = default_frame(loop);
  const Preimage zero = aj_preimage(loop, frame, HybridCoordinates::zero(loop));
  CHECK(zero.divisor.degree() == 0);
  CHECK(lattice_membership(hybrid_lattice(zero.complex, frame), aj_hybrid(zero.complex, frame, zero.divisor)).member);

  HybridCoordinates half = HybridCoordinates::zero(loop);
  half.gamma(0) = Rational(1, 2);
  const Preimage p = aj_preimage(loop, frame, half);
  CHECK(p.divisor.degree() == 0);
  CHECK(p.divisor[HybridPlace::on_edge(loop.graph, 0, Rational(1, 2))] == 1);
  CHECK(p.divisor[HybridPlace::marked_point(loop.graph, EdgeSlot{0, End::Tail})] == -1);
  CHECK(lattice_membership(hybrid_lattice(p.complex, frame), aj_hybrid(p.complex, frame, p.divisor) - half).member);

  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    verify::InstanceSeed s;
    s.seed = seed;
    const verify::RandomInstance inst = verify::random_instance(s);
    const Frame f = default_frame(inst.complex);
    for (const auto& d0 : inst.divisors) {
      const Preimage pre = aj_preimage(inst.complex, f, aj_hybrid(inst.complex, f, d0));
      CHECK(pre.divisor.degree() == 0);
      CHECK(is_principal_hybrid(pre.complex, pre.divisor - d0).principal);
    }
  }
}

TEST_CASE("changing the frame") {
  const MCRS m = verify::fixture_fig1();
  const Frame a = default_frame(m);
  const std::vector<std::size_t> tree = alternate_tree_edges(m.graph);
  const Frame b = make_frame(m, 2, tree);
  CHECK(b.basis.non_tree_edges != a.basis.non_tree_edges);

  const HybridLattice lb = hybrid_lattice(m, b);
  const HybridDivisor d = difference(named(m, "v1", "a"), named(m, "v3", "a"));
  const HybridCoordinates moved = change_frame(m, a, b, aj_hybrid(m, a, d));
  CHECK(lattice_membership(lb, moved - aj_hybrid(m, b, d)).member);
  CHECK(is_principal_hybrid(m, d).principal == lattice_membership(lb, aj_hybrid(m, b, d)).member);
}

TEST_CASE("exactness checks on the fixtures") {
  for (const auto& [name, m] : std::vector<std::pair<std::string, MCRS>>{
           {"edge", verify::fixture_edge()}, {"loop", verify::fixture_loop()}, {"fig1", verify::fixture_fig1()},
           {"theta", theta_with_tori()}}) {
    CAPTURE(name);
    std::vector<HybridDivisor> samples;
    for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
      if (m.surface(v).points.count("p") == 0) continue;
      samples.push_back(difference(HybridPlace::surface_point(v, SurfacePointRef::named("p")),
                                   HybridPlace::marked_point(m.graph, m.graph.slots(v).empty() ? EdgeSlot{} : m.graph.slots(v)[0])));
    }
    const SESReport r = ses_checks(m, name, samples);
    CHECK_FALSE(r.entries.empty());
    for (const auto& e : r.entries) {
      CAPTURE(e.property);
      CAPTURE(e.detail);
      CHECK(e.verdict);
    }
  }
}
