#include "hybrid_jacobi/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <sstream>

#include "hybrid_jacobi/io.hpp"

namespace hybrid_jacobi::verify {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) fail(ErrorCode::BoundsInfeasible, "empty integer range");
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return lo + static_cast<std::int64_t>(x % range);
}

Rational Rng::rational(std::int64_t bound, std::int64_t max_den) {
  const std::int64_t q = uniform(1, max_den);
  return Rational(uniform(-bound * q, bound * q), q);
}

Rational Rng::positive_rational(std::int64_t bound, std::int64_t max_den) {
  const std::int64_t q = uniform(1, max_den);
  return Rational(uniform(1, bound * q), q);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

void check_bounds(const InstanceSeed& s) {
  if (s.max_vertices < 1) fail(ErrorCode::BoundsInfeasible, "a complex needs at least one vertex");
  if (s.max_edges < 0 || s.max_genus < 0) fail(ErrorCode::BoundsInfeasible, "negative edge or genus bound");
  if (s.coeff_bound < 1 || s.denominator_bound < 1) fail(ErrorCode::BoundsInfeasible, "coefficient and denominator bounds must be positive");
}

CVector random_cvector(Rng& rng, int genus) {
  CVector z;
  for (int k = 0; k < genus; ++k) z.emplace_back(rng.rational(1, 12), rng.rational(1, 12));
  return z;
}

// (I | tau) with Im(tau) diagonally dominant, hence nonsingular.
std::vector<CVector> random_lattice(Rng& rng, int genus) {
  std::vector<CVector> out;
  for (int k = 0; k < genus; ++k) {
    CVector e = zero_cvector(static_cast<std::size_t>(genus));
    e[static_cast<std::size_t>(k)] = Complex(Rational(1));
    out.push_back(std::move(e));
  }
  for (int k = 0; k < genus; ++k) {
    CVector tau;
    for (int j = 0; j < genus; ++j) {
      const Rational im = j == k ? Rational(genus) + rng.positive_rational(1, 4) : rng.rational(1, 4) / 2;
      tau.emplace_back(rng.rational(1, 6), im);
    }
    out.push_back(std::move(tau));
  }
  return out;
}

CVector random_lattice_element(Rng& rng, const VertexSurface& s) {
  CVector out = zero_cvector(static_cast<std::size_t>(s.genus));
  for (const auto& lambda : s.lattice) add_scaled(out, Rational(rng.uniform(-2, 2)), lambda);
  return out;
}

SurfaceDivisor random_vertex_class(Rng& rng) {
  SurfaceDivisor d;
  const std::int64_t a = rng.uniform(-2, 2);
  const std::int64_t b = rng.uniform(-2, 2);
  d.add(SurfacePointRef::named("s0"), a);
  d.add(SurfacePointRef::named("r0"), -a);
  d.add(SurfacePointRef::named("s1"), b);
  d.add(SurfacePointRef::named("p"), b);
  d.add(SurfacePointRef::named("r0"), -b);
  d.add(SurfacePointRef::named("r1"), -b);
  return d;
}

Rational random_offset(Rng& rng, const Rational& length) {
  const std::int64_t q = rng.uniform(2, 12);
  return length * Rational(rng.uniform(1, q - 1), q);
}

HybridDivisor random_hybrid_divisor(Rng& rng, const MCRS& m, const InstanceSeed& s) {
  HybridDivisor d;
  const MetricGraph& g = m.graph;
  const auto terms = rng.uniform(1, 4);
  for (std::int64_t t = 0; t < terms; ++t) {
    const std::int64_t coeff = rng.uniform(-s.coeff_bound, s.coeff_bound);
    const auto v = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(g.vertex_count()) - 1));
    switch (rng.uniform(0, 2)) {
      case 0: {
        const auto& pts = m.surface(v).points;
        auto it = pts.begin();
        std::advance(it, rng.uniform(0, static_cast<std::int64_t>(pts.size()) - 1));
        d.add(HybridPlace::surface_point(v, SurfacePointRef::named(it->first)), coeff);
        break;
      }
      case 1: {
        if (g.valency(v) == 0) break;
        const auto& slots = g.slots(v);
        const EdgeSlot slot = slots[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(slots.size()) - 1))];
        d.add(HybridPlace::marked_point(g, slot), coeff);
        break;
      }
      default: {
        if (g.edge_count() == 0) break;
        const auto e = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(g.edge_count()) - 1));
        d.add(HybridPlace::on_edge(g, e, random_offset(rng, g.edge(e).length)), coeff);
        break;
      }
    }
  }
  const auto v = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(g.vertex_count()) - 1));
  d.add(HybridPlace::surface_point(v, SurfacePointRef::named("p")), -d.degree());
  return d;
}

// Distances from a vertex set, by repeated relaxation (graphs here are tiny).
std::vector<std::optional<Rational>> distances(const MetricGraph& g, const std::vector<bool>& sources) {
  std::vector<std::optional<Rational>> d(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (sources[v]) d[v] = Rational(0);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : g.edges()) {
      for (const auto& [a, b] : {std::pair{e.tail, e.head}, std::pair{e.head, e.tail}}) {
        if (d[a] && (!d[b] || *d[a] + e.length < *d[b])) {
          d[b] = *d[a] + e.length;
          changed = true;
        }
      }
    }
  }
  return d;
}

PLFunction clamped_distance(const MetricGraph& g, const std::vector<bool>& sources, const Rational& cap) {
  const auto d = distances(g, sources);
  auto value = [&](std::size_t e, const Rational& t) {
    const Edge& edge = g.edge(e);
    const Rational x = std::min(*d[edge.tail] + t, *d[edge.head] + edge.length - t);
    return std::min(x, cap);
  };
  std::map<GraphPlace, Rational> values;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) values[GraphPlace::at_vertex(v)] = std::min(*d[v], cap);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    const Rational candidates[] = {(*d[edge.head] + edge.length - *d[edge.tail]) / 2, cap - *d[edge.tail],
                                   edge.length - (cap - *d[edge.head])};
    for (const auto& t : candidates) {
      if (t > 0 && t < edge.length) values[GraphPlace::interior(e, t)] = value(e, t);
    }
  }
  return PLFunction::from_breakpoints(g, values);
}

std::string vertex_name(std::size_t v) { return "v" + std::to_string(v); }

VertexSurface torus_with(std::map<EdgeSlot, CVector> marked, std::map<std::string, CVector> points) {
  VertexSurface s;
  s.genus = 1;
  s.lattice = {{Complex(Rational(1))}, {Complex(Rational(0), Rational(1))}};
  s.marked = std::move(marked);
  s.points = std::move(points);
  return s;
}

VertexSurface sphere_at(const MetricGraph& g, std::size_t v) {
  VertexSurface s;
  for (const auto& slot : g.slots(v)) s.marked[slot] = CVector{};
  s.points["p"] = CVector{};
  return s;
}

CVector c1(Rational re, Rational im = Rational(0)) { return {Complex(std::move(re), std::move(im))}; }

}  // namespace

MetricGraph random_graph(Rng& rng, const InstanceSeed& s) {
  check_bounds(s);
  const auto n = rng.uniform(1, std::min<std::int64_t>(s.max_vertices, s.max_edges + 1));
  std::vector<std::string> vertices;
  for (std::int64_t v = 0; v < n; ++v) vertices.push_back(vertex_name(static_cast<std::size_t>(v)));
  std::vector<std::pair<std::int64_t, std::int64_t>> ends;
  for (std::int64_t v = 1; v < n; ++v) ends.emplace_back(rng.uniform(0, v - 1), v);
  const auto extra = rng.uniform(0, s.max_edges - (n - 1));
  for (std::int64_t k = 0; k < extra; ++k) ends.emplace_back(rng.uniform(0, n - 1), rng.uniform(0, n - 1));
  for (std::size_t k = ends.size(); k > 1; --k) {
    std::swap(ends[k - 1], ends[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(k) - 1))]);
  }
  std::vector<EdgeSpec> edges;
  for (std::size_t k = 0; k < ends.size(); ++k) {
    auto [a, b] = ends[k];
    if (rng.coin()) std::swap(a, b);
    edges.push_back({"e" + std::to_string(k), vertices[static_cast<std::size_t>(a)], vertices[static_cast<std::size_t>(b)],
                     rng.positive_rational(3, s.denominator_bound)});
  }
  return MetricGraph::build(std::move(vertices), edges);
}

PLFunction random_pl_function(Rng& rng, const MetricGraph& g, const InstanceSeed& s) {
  PLFunction f = PLFunction::constant(g, rng.rational(s.coeff_bound, 6));
  const auto moves = rng.uniform(1, 3);
  for (std::int64_t k = 0; k < moves; ++k) {
    std::vector<bool> sources(g.vertex_count());
    bool any = false;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) any = (sources[v] = rng.coin()) || any;
    if (!any) sources[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(g.vertex_count()) - 1))] = true;
    const Rational cap = rng.positive_rational(2, 6);
    const auto weight = rng.uniform(-3, 3);
    if (weight == 0) continue;
    f = add(g, f, scale(clamped_distance(g, sources, cap), Rational(weight)));
  }
  return f;
}

TropicalDivisor random_tropical_divisor(Rng& rng, const MetricGraph& g, const InstanceSeed& s) {
  TropicalDivisor d;
  const auto terms = rng.uniform(1, 4);
  for (std::int64_t t = 0; t < terms; ++t) {
    const std::int64_t coeff = rng.uniform(-s.coeff_bound, s.coeff_bound);
    if (g.edge_count() == 0 || rng.coin()) {
      d.add(GraphPlace::at_vertex(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(g.vertex_count()) - 1))), coeff);
    } else {
      const auto e = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(g.edge_count()) - 1));
      d.add(GraphPlace::on_edge(g, e, random_offset(rng, g.edge(e).length)), coeff);
    }
  }
  d.add(GraphPlace::at_vertex(0), -d.degree());
  return d;
}

RandomInstance random_instance(const InstanceSeed& s) {
  check_bounds(s);
  Rng rng(s.seed);
  MetricGraph g = random_graph(rng, s);
  std::map<std::string, VertexSurface> surfaces;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexSurface surf;
    surf.genus = static_cast<int>(rng.uniform(0, s.max_genus));
    surf.lattice = random_lattice(rng, surf.genus);
    for (const auto& slot : g.slots(v)) surf.marked[slot] = random_cvector(rng, surf.genus);
    surf.points["p"] = zero_cvector(static_cast<std::size_t>(surf.genus));
    surf.points["r0"] = random_cvector(rng, surf.genus);
    surf.points["r1"] = random_cvector(rng, surf.genus);
    // Relation points: (s0) - (r0) and (s1) + (p) - (r0) - (r1) are principal.
    surf.points["s0"] = surf.points["r0"] + random_lattice_element(rng, surf);
    surf.points["s1"] = surf.points["r0"] + surf.points["r1"] + random_lattice_element(rng, surf);
    surfaces[g.vertex_id(v)] = std::move(surf);
  }
  RandomInstance out;
  out.complex = build_mcrs(std::move(g), std::move(surfaces));
  const MCRS& m = out.complex;
  for (int k = 0; k < 3; ++k) out.divisors.push_back(random_hybrid_divisor(rng, m, s));
  for (int k = 0; k < 2; ++k) out.pl_functions.push_back(random_pl_function(rng, m.graph, s));
  for (int k = 0; k < 2; ++k) {
    HybridFunction f = extend_by_constants(m, random_pl_function(rng, m.graph, s));
    for (auto& cls : f.vertex_classes) cls = random_vertex_class(rng);
    validate_function(m, f);
    out.functions.push_back(std::move(f));
  }
  return out;
}

Rational matrix_tree_oracle(const MetricGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Rational product(1);
  for (const auto& e : g.edges()) product *= e.length;
  if (n == 1) return product;
  MatrixQ lap = MatrixQ::Constant(n, n, Rational(0));
  for (const auto& e : g.edges()) {
    if (e.is_loop()) continue;
    const Rational c = 1 / e.length;
    const auto a = static_cast<Eigen::Index>(e.tail);
    const auto b = static_cast<Eigen::Index>(e.head);
    lap(a, a) += c;
    lap(b, b) += c;
    lap(a, b) -= c;
    lap(b, a) -= c;
  }
  return product * linalg::determinant<Rational>(lap.bottomRightCorner(n - 1, n - 1));
}

MetricGraph fixture_theta() {
  return MetricGraph::build({"u", "w"}, {{"e1", "u", "w", Rational(1)}, {"e2", "u", "w", Rational(1)}, {"e3", "u", "w", Rational(1)}});
}

MCRS fixture_edge() {
  MetricGraph g = MetricGraph::build({"v1", "v2"}, {{"e", "v1", "v2", Rational(1)}});
  const Rational a_re(1, 3);
  const Rational a_im(1, 5);
  std::map<std::string, VertexSurface> s;
  s["v1"] = torus_with({{EdgeSlot{0, End::Tail}, c1(Rational(1, 4))}},
                       {{"p", c1(Rational(0))},
                        {"a", c1(a_re, a_im)},
                        {"b", c1(a_re, a_im - 1)},
                        {"sixth", c1(a_re - Rational(1, 6), a_im)},
                        {"q", c1(Rational(5, 4))}});
  s["v2"] = torus_with({{EdgeSlot{0, End::Head}, c1(Rational(0))}},
                       {{"p", c1(Rational(0))}, {"c", c1(Rational(1, 2), Rational(1, 7))}});
  return build_mcrs(std::move(g), std::move(s));
}

MCRS fixture_loop(const Complex& w) {
  MetricGraph g = MetricGraph::build({"v"}, {{"e", "v", "v", Rational(1)}});
  std::map<std::string, VertexSurface> s;
  s["v"] = torus_with({{EdgeSlot{0, End::Tail}, c1(Rational(0))}, {EdgeSlot{0, End::Head}, CVector{w}}},
                      {{"p", c1(Rational(0))}, {"a", c1(Rational(2, 7), Rational(1, 3))}});
  return build_mcrs(std::move(g), std::move(s));
}

MCRS fixture_fig1() {
  MetricGraph g = MetricGraph::build({"v1", "v2", "v3", "v4"}, {{"e1", "v1", "v2", Rational(1)},
                                                                {"e2", "v2", "v3", Rational(1)},
                                                                {"e3", "v3", "v4", Rational(1)},
                                                                {"e4", "v4", "v1", Rational(1)}});
  std::map<std::string, VertexSurface> s;
  s["v1"] = torus_with({{EdgeSlot{0, End::Tail}, c1(Rational(1, 4))}, {EdgeSlot{3, End::Head}, c1(Rational(0), Rational(1, 3))}},
                       {{"p", c1(Rational(0))}, {"a", c1(Rational(1, 2), Rational(1, 2))}});
  s["v2"] = sphere_at(g, 1);
  s["v3"] = torus_with({{EdgeSlot{1, End::Head}, c1(Rational(1, 2))}, {EdgeSlot{2, End::Tail}, c1(Rational(1, 5), Rational(1, 7))}},
                       {{"p", c1(Rational(0))}, {"a", c1(Rational(1, 3), Rational(2, 3))}});
  s["v4"] = sphere_at(g, 3);
  return build_mcrs(std::move(g), std::move(s));
}

nlohmann::json SuiteResult::to_json() const {
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : failures) fails.push_back({{"case", f.case_index}, {"seed", f.seed}, {"message", f.message}});
  return {{"suite", name},     {"cases", cases},       {"checks", checks}, {"disagreements", disagreements},
          {"failures", fails}, {"seconds", seconds}, {"passed", passed()}};
}

std::string SuiteResult::summary() const {
  std::ostringstream os;
  os << name << ": " << cases << " cases, " << checks << " checks, " << failures.size() << " failures, "
     << disagreements << " disagreements, " << seconds << " s";
  for (const auto& f : failures) os << "\n  case " << f.case_index << " (seed " << f.seed << "): " << f.message;
  return os.str();
}

std::vector<std::string> suite_names() {
  return {"tree-theorem", "oracle-agreement", "extension-zero", "diagram", "ses",
          "chipfire",     "invariance",       "principal",      "serialization"};
}

namespace {

// A case body returns an empty string on success, or a failure message.
using CaseBody = std::function<std::string(const InstanceSeed&, int& checks)>;

struct Runner {
  SuiteResult result;

  void run(int index, const InstanceSeed& s, const CaseBody& body) {
    ++result.cases;
    std::string message;
    try {
      message = body(s, result.checks);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InternalDisagreement) ++result.disagreements;
      message = e.what();
    } catch (const std::exception& e) {
      message = e.what();
    }
    if (!message.empty()) result.failures.push_back({index, s.seed, message});
  }
};

InstanceSeed case_seed(const InstanceSeed& base, int index) {
  InstanceSeed s = base;
  s.seed = derive_seed(base.seed, static_cast<std::uint64_t>(index));
  return s;
}

std::string tree_theorem_case(const InstanceSeed& s, int& checks) {
  Rng rng(s.seed);
  const MetricGraph g = random_graph(rng, s);
  const MatrixQ gram = period_matrix(g).gram;
  const Rational det = gram.size() == 0 ? Rational(1) : linalg::determinant<Rational>(gram);
  ++checks;
  const Rational oracle = matrix_tree_oracle(g);
  if (det != oracle) return "det M = " + format_rational(det) + " but the Laplacian minor gives " + format_rational(oracle);
  return {};
}

std::string oracle_agreement_case(const InstanceSeed& s, int& checks) {
  Rng rng(s.seed);
  const MetricGraph g = random_graph(rng, s);
  const PeriodData pd = period_matrix(g);
  for (int k = 0; k < 10; ++k) {
    const bool constructed = k % 2 == 1;
    const TropicalDivisor d = constructed ? divisor_of_pl(random_pl_function(rng, g, s)) : random_tropical_divisor(rng, g, s);
    PLFunction witness;
    const bool by_lattice = principal_by_lattice(g, pd, d, NumericMode::exact());
    const bool by_laplacian = principal_by_laplacian(g, d, NumericMode::exact(), &witness);
    ++checks;
    if (by_lattice != by_laplacian) return "routes disagree on " + describe(g, d);
    if (constructed && !by_lattice) return "divisor of a PL function judged not principal: " + describe(g, d);
    if (by_laplacian && !(divisor_of_pl(witness) == d)) return "witness divisor differs from " + describe(g, d);
  }
  return {};
}

std::string extension_zero_case(const InstanceSeed& s, int& checks) {
  const RandomInstance inst = random_instance(s);
  const MCRS& m = inst.complex;
  const HybridLattice lattice = hybrid_lattice(m);
  for (const auto& f : inst.pl_functions) {
    const HybridDivisor d = divisor_of_hybrid(m, extend_by_constants(m, f));
    ++checks;
    if (!lattice_membership(lattice, aj_hybrid(m, lattice.frame, d)).member) {
      return "image of div(F) not in the lattice: " + describe(m, d);
    }
    if (!is_principal_hybrid(m, d).principal) return "div(F) judged not principal: " + describe(m, d);
    if (!(gamma_part(m, d) == divisor_of_pl(f))) return "graph part of div(F) differs from div(f)";
  }
  return {};
}

std::string diagram_case(const InstanceSeed& s, int& checks) {
  const RandomInstance inst = random_instance(s);
  const MCRS& m = inst.complex;
  const Frame frame = default_frame(m);
  const PeriodData pd = period_matrix(m.graph, frame.basis);
  for (const auto& d : inst.divisors) {
    const HybridCoordinates c = aj_hybrid(m, frame, d);
    const VectorQ trop = aj_tropical(m.graph, pd, gamma_part(m, d), GraphPlace::at_vertex(frame.base_vertex));
    ++checks;
    if (pd.gram.size() > 0 &&
        !lattice_membership(pd.gram, c.gamma - trop, NumericMode::exact()).member) {
      return "graph block differs from the tropical image modulo periods for " + describe(m, d);
    }
    // Vertex-supported part, each surface brought to degree 0 at "p".
    HybridDivisor vs;
    for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
      const SurfaceDivisor part = surface_part(d, v);
      for (const auto& [p, k] : part.terms()) vs.add(HybridPlace::surface_point(v, p), k);
      vs.add(HybridPlace::surface_point(v, SurfacePointRef::named("p")), -part.degree());
    }
    const HybridCoordinates cv = aj_hybrid(m, frame, vs);
    ++checks;
    for (Eigen::Index i = 0; i < cv.gamma.size(); ++i) {
      if (cv.gamma(i) != 0) return "vertex-supported divisor has a nonzero graph block";
    }
    for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
      if (!(cv.blocks[v] == aj_surface(m.surface(v), surface_part(vs, v)))) {
        return "block " + m.graph.vertex_id(v) + " differs from the surface Abel-Jacobi image";
      }
    }
  }
  return {};
}

std::vector<HybridDivisor> ses_samples(const RandomInstance& inst) {
  std::vector<HybridDivisor> samples = inst.divisors;
  for (const auto& f : inst.functions) samples.push_back(divisor_of_hybrid(inst.complex, f));
  for (const auto& f : inst.pl_functions) samples.push_back(divisor_of_hybrid(inst.complex, extend_by_constants(inst.complex, f)));
  return samples;
}

std::string report_failures(const SESReport& r) {
  for (const auto& e : r.entries) {
    if (!e.verdict) return e.fixture + ": " + e.property + ": " + e.detail;
  }
  return {};
}

std::string ses_fixture_case(const std::string& name, const MCRS& m, const InstanceSeed& s, int& checks) {
  Rng rng(s.seed);
  std::vector<HybridDivisor> samples;
  for (int k = 0; k < 6; ++k) samples.push_back(random_hybrid_divisor(rng, m, s));
  for (int k = 0; k < 2; ++k) samples.push_back(divisor_of_hybrid(m, extend_by_constants(m, random_pl_function(rng, m.graph, s))));
  const SESReport r = ses_checks(m, name, samples);
  checks += static_cast<int>(r.entries.size());
  return report_failures(r);
}

std::string ses_case(const InstanceSeed& s, int& checks) {
  const RandomInstance inst = random_instance(s);
  const SESReport r = ses_checks(inst.complex, "random seed " + std::to_string(s.seed), ses_samples(inst));
  checks += static_cast<int>(r.entries.size());
  return report_failures(r);
}

std::string chipfire_case(const InstanceSeed& s, int& checks) {
  Rng rng(s.seed);
  const MetricGraph g = random_graph(rng, s);
  const PLFunction f = random_pl_function(rng, g, s);
  const auto moves = decompose_chip_firing(g, f);
  Rational lowest = f.values().front();
  for (const auto& v : f.values()) lowest = std::min(lowest, v);
  PLFunction sum = PLFunction::constant(g, lowest);
  for (const auto& move : moves) {
    std::string why;
    ++checks;
    if (!move.satisfies_invariants(&why)) return "move fails its invariants: " + why;
    sum = add(g, sum, move.as_function());
  }
  ++checks;
  if (!same_function(g, sum, f)) return "moves do not sum to the function";
  return {};
}

std::string invariance_case(const InstanceSeed& s, int& checks) {
  const RandomInstance inst = random_instance(s);
  const MCRS& m = inst.complex;
  Rng rng(derive_seed(s.seed, 7));
  const Frame reference = default_frame(m);
  std::vector<std::size_t> tree;
  for (std::size_t e = 0; e < m.graph.edge_count(); ++e) {
    if (reference.basis.tree.in_tree[e]) tree.push_back(e);
  }
  const std::size_t base = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(m.graph.vertex_count()) - 1));
  const Frame moved = make_frame(m, base, alternate_tree_edges(m.graph));
  const HybridLattice lattice = hybrid_lattice(m, moved);

  std::vector<GraphPlace> cuts;
  for (int k = 0; k < 2 && m.graph.edge_count() > 0; ++k) {
    const auto e = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(m.graph.edge_count()) - 1));
    cuts.push_back(GraphPlace::on_edge(m.graph, e, random_offset(rng, m.graph.edge(e).length)));
  }
  const RefinedComplex refined = refine_complex(m, cuts);
  ++checks;
  if (refined.complex.genus != m.genus || homology_rank(refined.complex) != homology_rank(m)) {
    return "refinement changed the genus or the homology rank";
  }

  std::vector<HybridDivisor> samples = ses_samples(inst);
  const PeriodData pd = period_matrix(m.graph);
  for (const auto& d : samples) {
    ++checks;
    const HybridCoordinates diff = aj_hybrid(m, moved, d) - change_frame(m, reference, moved, aj_hybrid(m, reference, d));
    if (!lattice_membership(lattice, diff).member) return "frame change moved the image off the lattice for " + describe(m, d);
    ++checks;
    const TropicalDivisor t = gamma_part(m, d);
    if (!(aj_tropical(m.graph, pd, t, GraphPlace::at_vertex(0)) == aj_tropical(m.graph, pd, t, GraphPlace::at_vertex(base)))) {
      return "degree-0 tropical image depends on the basepoint";
    }
    ++checks;
    const bool before = is_principal_hybrid(m, d).principal;
    const bool after = is_principal_hybrid(refined.complex, refined.to_refined(d)).principal;
    if (before != after) return "refinement changed the verdict on " + describe(m, d);
  }
  return {};
}

std::string principal_case(const InstanceSeed& s, int& checks) {
  // Redraw until some surface has positive genus so the negative direction
  // has a block to perturb.
  InstanceSeed draw = s;
  RandomInstance inst = random_instance(draw);
  for (int k = 1; inst.complex.surface_genus_total() == 0; ++k) {
    if (s.max_genus == 0 || k > 64) return "no instance with a positive-genus surface";
    draw.seed = derive_seed(s.seed, static_cast<std::uint64_t>(1000 + k));
    inst = random_instance(draw);
  }
  const MCRS& m = inst.complex;
  std::size_t v = 0;
  while (m.surface(v).genus == 0) ++v;
  for (const auto& f : inst.functions) {
    const HybridDivisor d = divisor_of_hybrid(m, f);
    ++checks;
    const HybridVerdict yes = is_principal_hybrid(m, d, Algorithm::Both);
    if (!yes.principal) return "div of a hybrid function judged not principal: " + yes.reason;

    MCRS perturbed = m;
    VertexSurface& surf = perturbed.surfaces[v];
    CVector shifted = surf.points.at("p");
    surf.points["perturbed"] = add_scaled(shifted, Rational(1, 6), surf.lattice.front());
    HybridDivisor bad = d;
    bad.add(HybridPlace::surface_point(v, SurfacePointRef::named("perturbed")), 1);
    bad.add(HybridPlace::surface_point(v, SurfacePointRef::named("p")), -1);
    ++checks;
    const HybridVerdict no = is_principal_hybrid(perturbed, bad, Algorithm::Both);
    if (no.principal) return "perturbation by a sixth of a period left the divisor principal";
  }
  return {};
}

std::string serialization_case(const InstanceSeed& s, int& checks) {
  const RandomInstance inst = random_instance(s);
  const MCRS& m = inst.complex;
  const std::string text = io::canonical_dump(io::instance_to_json(m));
  const std::string again = io::canonicalize_instance(text);
  ++checks;
  if (again != text) return "instance did not re-serialize byte-identically";
  const MCRS parsed = io::parse_instance(nlohmann::json::parse(text));
  for (const auto& d : inst.divisors) {
    ++checks;
    const std::string dt = io::canonical_dump(io::divisor_to_json(m, d));
    const HybridDivisor back = io::parse_divisor(nlohmann::json::parse(dt), parsed);
    if (!(back == d) || io::canonical_dump(io::divisor_to_json(parsed, back)) != dt) return "divisor did not round-trip";
  }
  for (const auto& f : inst.functions) {
    ++checks;
    const std::string ft = io::canonical_dump(io::function_to_json(m, f));
    const HybridFunction back = io::parse_function(nlohmann::json::parse(ft), parsed);
    if (io::canonical_dump(io::function_to_json(parsed, back)) != ft) return "function did not round-trip";
  }
  return {};
}

}  // namespace

SuiteResult run_property_suite(const std::string& name, const InstanceSeed& seed, int cases) {
  static const std::map<std::string, CaseBody> bodies = {
      {"tree-theorem", tree_theorem_case}, {"oracle-agreement", oracle_agreement_case},
      {"extension-zero", extension_zero_case}, {"diagram", diagram_case},
      {"ses", ses_case}, {"chipfire", chipfire_case},
      {"invariance", invariance_case}, {"principal", principal_case},
      {"serialization", serialization_case}};
  const auto it = bodies.find(name);
  if (it == bodies.end()) fail(ErrorCode::UnknownSuite, "no suite named \"" + name + "\"");
  check_bounds(seed);

  const auto start = std::chrono::steady_clock::now();
  Runner runner;
  runner.result.name = name;
  if (name == "ses") {
    const std::pair<const char*, std::function<MCRS()>> fixtures[] = {
        {"edge", fixture_edge}, {"loop", [] { return fixture_loop(); }}, {"fig1", fixture_fig1}};
    int index = -static_cast<int>(std::size(fixtures));
    for (const auto& [fixture, make] : fixtures) {
      runner.run(index, case_seed(seed, 1000 + index), [&](const InstanceSeed& s, int& checks) {
        return ses_fixture_case(fixture, make(), s, checks);
      });
      ++index;
    }
  }
  for (int i = 0; i < cases; ++i) runner.run(i, case_seed(seed, i), it->second);
  runner.result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return runner.result;
}

}  // namespace hybrid_jacobi::verify
