#include "hybrid_jacobi/hybrid.hpp"

#include <algorithm>
#include <numeric>

namespace hybrid_jacobi {

namespace {

// Image of the root basepoint's tree path to the basepoint of every vertex.
std::vector<HybridCoordinates> vertex_potentials(const MCRS& m, const CycleBasis& basis) {
  const MetricGraph& g = m.graph;
  const SpanningTree& t = basis.tree;
  std::vector<std::size_t> order(g.vertex_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.depth[a] < t.depth[b]; });

  std::vector<HybridCoordinates> pot(g.vertex_count(), HybridCoordinates::zero(m));
  for (std::size_t w : order) {
    if (!t.parent_edge[w]) continue;
    const std::size_t u = t.parent[w];
    const std::size_t e = *t.parent_edge[w];
    const Edge& edge = g.edge(e);
    const bool forward = edge.tail == u;
    const EdgeSlot exit{e, forward ? End::Tail : End::Head};
    const EdgeSlot entry{e, forward ? End::Head : End::Tail};
    HybridCoordinates c = pot[u];
    add_scaled(c.blocks[u], Rational(1), m.surface(u).image(SurfacePointRef::marked(exit)));
    add_scaled(c.blocks[w], Rational(-1), m.surface(w).image(SurfacePointRef::marked(entry)));
    const Rational step = forward ? edge.length : Rational(-edge.length);
    for (int i = 0; i < basis.size(); ++i) {
      const int coeff = basis.cycles(i, static_cast<Eigen::Index>(e));
      if (coeff != 0) c.gamma(i) += coeff * step;
    }
    pot[w] = std::move(c);
  }
  return pot;
}

HybridCoordinates place_image(const MCRS& m, const CycleBasis& basis, const std::vector<HybridCoordinates>& pot,
                              const HybridPlace& p) {
  if (p.on_surface()) {
    HybridCoordinates c = pot[p.vertex()];
    add_scaled(c.blocks[p.vertex()], Rational(1), m.surface(p.vertex()).image(p.point()));
    return c;
  }
  const Edge& edge = m.graph.edge(p.edge());
  HybridCoordinates c = pot[edge.tail];
  add_scaled(c.blocks[edge.tail], Rational(1), m.surface(edge.tail).image(SurfacePointRef::marked({p.edge(), End::Tail})));
  for (int i = 0; i < basis.size(); ++i) {
    const int coeff = basis.cycles(i, static_cast<Eigen::Index>(p.edge()));
    if (coeff != 0) c.gamma(i) += coeff * p.offset();
  }
  return c;
}

HybridCoordinates aj_with(const MCRS& m, const Frame& frame, const std::vector<HybridCoordinates>& pot,
                          const HybridDivisor& d) {
  HybridCoordinates out = HybridCoordinates::zero(m);
  for (const auto& [p, c] : d.terms()) {
    p.check_on(m);
    out += Rational(c) * place_image(m, frame.basis, pot, p);
  }
  if (d.degree() != 0) out -= Rational(d.degree()) * pot[frame.base_vertex];
  return out;
}

std::string residue_reason(const MCRS& m, std::size_t v) {
  return "surface block " + m.graph.vertex_id(v) + " residue not in lattice";
}

const char* const kGraphReason = "graph part not principal: Abel-Jacobi coordinates not in the period lattice";

HybridVerdict lattice_route(const MCRS& m, const HybridDivisor& d, const NumericMode& mode) {
  HybridVerdict out;
  out.algorithm = Algorithm::Lattice;
  const HybridLattice lattice = hybrid_lattice(m);
  const HybridCoordinates b = aj_hybrid(m, lattice.frame, d);
  const int g = lattice.periods.basis.size();
  out.cycle_coordinates = g == 0 ? VectorQ(0) : linalg::solve_unique<Rational>(lattice.periods.gram, b.gamma);
  if (!all_integral(out.cycle_coordinates, mode)) {
    out.reason = kGraphReason;
    return out;
  }
  HybridCoordinates residue = b;
  for (int j = 0; j < g; ++j) {
    residue -= Rational(nearest_integer(out.cycle_coordinates(j))) * lattice.cycle_lift(static_cast<std::size_t>(j));
  }
  for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
    LatticeMembership lm = reduce_mod_lattice(m.surface(v), residue.blocks[v], mode);
    if (!lm.member) {
      out.reason = residue_reason(m, v);
      out.vertex_coordinates.clear();
      return out;
    }
    out.vertex_coordinates.push_back(std::move(lm.coordinates));
  }
  out.principal = true;
  return out;
}

HybridVerdict proof_route(const MCRS& m, const HybridDivisor& d, const NumericMode& mode) {
  HybridVerdict out;
  out.algorithm = Algorithm::Proof;
  const TropicalDivisor graph_part = gamma_part(m, d);
  const TropicalVerdict tv = is_principal_tropical(m.graph, period_matrix(m.graph), graph_part, mode);
  if (!tv.principal) {
    out.reason = kGraphReason;
    return out;
  }
  const HybridDivisor rest = d - divisor_of_hybrid(m, extend_by_constants(m, tv.witness));
  for (const auto& [p, c] : rest.terms()) {
    if (!p.on_surface()) fail(ErrorCode::InternalDisagreement, "residual divisor has an edge chip at " + describe(m, p));
  }
  for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
    const SurfaceDivisor part = surface_part(rest, v);
    if (part.degree() != 0) {
      fail(ErrorCode::InternalDisagreement, "residual divisor has nonzero degree on " + m.graph.vertex_id(v));
    }
    LatticeMembership lm = reduce_mod_lattice(m.surface(v), aj_surface(m.surface(v), part), mode);
    if (!lm.member) {
      out.reason = residue_reason(m, v);
      out.vertex_coordinates.clear();
      return out;
    }
    out.vertex_coordinates.push_back(std::move(lm.coordinates));
  }
  out.witness = tv.witness;
  out.principal = true;
  return out;
}

std::string unused_name(const VertexSurface& s, std::string name) {
  while (s.points.count(name)) name += "'";
  return name;
}

}  // namespace

Frame default_frame(const MCRS& m) { return {0, cycle_basis(m.graph)}; }

Frame make_frame(const MCRS& m, std::size_t base_vertex, std::span<const std::size_t> tree_edges) {
  if (base_vertex >= m.graph.vertex_count()) fail(ErrorCode::UnknownId, "base vertex index out of range");
  return {base_vertex, cycle_basis(m.graph, tree_edges)};
}

std::vector<std::size_t> alternate_tree_edges(const MetricGraph& g) {
  std::vector<std::size_t> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<std::size_t> out;
  for (std::size_t k = g.edge_count(); k-- > 0;) {
    const Edge& e = g.edge(k);
    const std::size_t a = find(e.tail);
    const std::size_t b = find(e.head);
    if (a == b) continue;
    parent[a] = b;
    out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

HybridCoordinates HybridCoordinates::zero(const MCRS& m) {
  HybridCoordinates c;
  for (const auto& s : m.surfaces) c.blocks.push_back(zero_cvector(static_cast<std::size_t>(s.genus)));
  c.gamma = zero_vector(m.graph.genus());
  return c;
}

HybridCoordinates& HybridCoordinates::operator+=(const HybridCoordinates& o) {
  if (blocks.size() != o.blocks.size() || gamma.size() != o.gamma.size()) {
    fail(ErrorCode::DimensionMismatch, "hybrid coordinates of different shapes");
  }
  for (std::size_t v = 0; v < blocks.size(); ++v) add_scaled(blocks[v], Rational(1), o.blocks[v]);
  gamma += o.gamma;
  return *this;
}

HybridCoordinates& HybridCoordinates::operator-=(const HybridCoordinates& o) {
  return *this += Rational(-1) * o;
}

HybridCoordinates operator*(const Rational& k, const HybridCoordinates& c) {
  HybridCoordinates out;
  for (const auto& b : c.blocks) {
    CVector scaled = zero_cvector(b.size());
    out.blocks.push_back(add_scaled(scaled, k, b));
  }
  out.gamma = c.gamma * k;
  return out;
}

bool operator==(const HybridCoordinates& a, const HybridCoordinates& b) {
  return a.blocks == b.blocks && a.gamma == b.gamma;
}

VectorQ HybridCoordinates::flatten() const {
  Eigen::Index n = gamma.size();
  for (const auto& b : blocks) n += 2 * static_cast<Eigen::Index>(b.size());
  VectorQ out(n);
  Eigen::Index k = 0;
  for (const auto& b : blocks) {
    const VectorQ r = realify(b);
    out.segment(k, r.size()) = r;
    k += r.size();
  }
  out.tail(gamma.size()) = gamma;
  return out;
}

bool HybridCoordinates::is_zero() const {
  for (const auto& b : blocks) {
    if (!hybrid_jacobi::is_zero(b)) return false;
  }
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    if (gamma(i) != 0) return false;
  }
  return true;
}

MatrixQ HybridLattice::matrix() const {
  if (generators.empty()) return MatrixQ(0, 0);
  const Eigen::Index rows = generators.front().flatten().size();
  MatrixQ out(rows, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = generators[k].flatten();
  return out;
}

HybridLattice hybrid_lattice(const MCRS& m) { return hybrid_lattice(m, default_frame(m)); }

HybridLattice hybrid_lattice(const MCRS& m, const Frame& frame) {
  HybridLattice out;
  out.frame = frame;
  out.periods = period_matrix(m.graph, frame.basis);
  for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
    for (const auto& lambda : m.surface(v).lattice) {
      HybridCoordinates c = HybridCoordinates::zero(m);
      c.blocks[v] = lambda;
      out.generators.push_back(std::move(c));
    }
  }
  out.surface_generator_count = out.generators.size();

  const auto pot = vertex_potentials(m, frame.basis);
  const CycleBasis& basis = frame.basis;
  for (int j = 0; j < basis.size(); ++j) {
    const std::size_t e = basis.non_tree_edges[static_cast<std::size_t>(j)];
    const Edge& edge = m.graph.edge(e);
    // Leave the tail through its marked point, run along the edge, enter the
    // head through its marked point, then return to the tail along the tree.
    HybridCoordinates h = pot[edge.tail] - pot[edge.head];
    add_scaled(h.blocks[edge.tail], Rational(1), m.surface(edge.tail).image(SurfacePointRef::marked({e, End::Tail})));
    add_scaled(h.blocks[edge.head], Rational(-1), m.surface(edge.head).image(SurfacePointRef::marked({e, End::Head})));
    for (int i = 0; i < basis.size(); ++i) {
      const int coeff = basis.cycles(i, static_cast<Eigen::Index>(e));
      if (coeff != 0) h.gamma(i) += coeff * edge.length;
    }
    if (h.gamma != out.periods.gram.row(j).transpose()) {
      fail(ErrorCode::InternalDisagreement, "lifted cycle does not reproduce the period matrix");
    }
    out.generators.push_back(std::move(h));
  }

  const auto expected = static_cast<Eigen::Index>(out.generators.size());
  if (expected > 0 && linalg::rank<Rational>(out.matrix()) != expected) {
    fail(ErrorCode::RankDeficient, "hybrid lattice generators are linearly dependent");
  }
  return out;
}

int homology_rank(const MCRS& m) {
  const int formula = 2 * m.surface_genus_total() + m.graph.genus();
  const HybridLattice lattice = hybrid_lattice(m);
  const MatrixQ mat = lattice.matrix();
  const int computed = mat.size() == 0 ? 0 : static_cast<int>(linalg::rank<Rational>(mat));
  if (computed != formula) fail(ErrorCode::InternalDisagreement, "lattice rank differs from 2*sum(g_v) + g");
  return formula;
}

HybridCoordinates aj_place(const MCRS& m, const Frame& frame, const HybridPlace& p) {
  p.check_on(m);
  return place_image(m, frame.basis, vertex_potentials(m, frame.basis), p);
}

HybridCoordinates aj_hybrid(const MCRS& m, const Frame& frame, const HybridDivisor& d) {
  return aj_with(m, frame, vertex_potentials(m, frame.basis), d);
}

HybridCoordinates aj_hybrid(const MCRS& m, const HybridDivisor& d) { return aj_hybrid(m, default_frame(m), d); }

LatticeMembership lattice_membership(const HybridLattice& lattice, const HybridCoordinates& c, const NumericMode& mode) {
  if (lattice.generators.empty()) {
    if (!c.is_zero()) fail(ErrorCode::DimensionMismatch, "nonzero coordinates in a zero-dimensional Jacobian");
    return {true, VectorQ(0)};
  }
  return lattice_membership(lattice.matrix(), c.flatten(), mode);
}

MatrixQ cycle_change_matrix(const MetricGraph& g, const CycleBasis& from, const CycleBasis& to) {
  const int n = from.size();
  if (to.size() != n) fail(ErrorCode::DimensionMismatch, "cycle bases of different sizes");
  (void)g;
  MatrixQ u(n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      u(k, i) = Rational(to.cycles(k, static_cast<Eigen::Index>(from.non_tree_edges[static_cast<std::size_t>(i)])));
    }
  }
  return u;
}

HybridCoordinates change_frame(const MCRS& m, const Frame& from, const Frame& to, const HybridCoordinates& c) {
  HybridCoordinates out = c;
  if (c.gamma.size() > 0) out.gamma = cycle_change_matrix(m.graph, from.basis, to.basis) * c.gamma;
  return out;
}

HybridVerdict is_principal_hybrid(const MCRS& m, const HybridDivisor& d, Algorithm algorithm, const NumericMode& mode) {
  if (d.degree() != 0) fail(ErrorCode::NonzeroDegree, "degree " + std::to_string(d.degree()));
  for (const auto& [p, c] : d.terms()) p.check_on(m);
  if (algorithm == Algorithm::Lattice) return lattice_route(m, d, mode);
  if (algorithm == Algorithm::Proof) return proof_route(m, d, mode);

  HybridVerdict by_lattice = lattice_route(m, d, mode);
  HybridVerdict by_proof = proof_route(m, d, mode);
  if (by_lattice.principal != by_proof.principal) {
    fail(ErrorCode::InternalDisagreement, "hybrid principality routes disagree on " + describe(m, d));
  }
  HybridVerdict out = std::move(by_proof);
  out.algorithm = Algorithm::Both;
  out.cycle_coordinates = std::move(by_lattice.cycle_coordinates);
  if (!out.principal) out.reason = by_lattice.reason;
  return out;
}

HybridFunction extend_by_constants(const MCRS& m, const PLFunction& f) {
  return {f, std::vector<SurfaceDivisor>(m.graph.vertex_count())};
}

HybridDivisor lift_divisor(const MCRS& m, const TropicalDivisor& d) {
  HybridDivisor out;
  for (const auto& [p, c] : d.terms()) {
    p.check_on(m.graph);
    if (!p.is_vertex()) {
      out.add(HybridPlace::on_edge(m.graph, p.edge(), p.offset()), c);
      continue;
    }
    const auto base = m.surface(p.vertex()).basepoint_name();
    if (!base) {
      fail(ErrorCode::MissingBasepointPoint, "surface at \"" + m.graph.vertex_id(p.vertex()) + "\" has no named point with image 0");
    }
    out.add(HybridPlace::surface_point(p.vertex(), SurfacePointRef::named(*base)), c);
  }
  return out;
}

Preimage aj_preimage(const MCRS& m, const Frame& frame, const HybridCoordinates& target) {
  const HybridCoordinates shape = HybridCoordinates::zero(m);
  if (target.blocks.size() != shape.blocks.size() || target.gamma.size() != shape.gamma.size()) {
    fail(ErrorCode::DimensionMismatch, "target does not match the shape of the Jacobian");
  }
  for (std::size_t v = 0; v < shape.blocks.size(); ++v) {
    if (target.blocks[v].size() != shape.blocks[v].size()) fail(ErrorCode::DimensionMismatch, "target block of wrong dimension");
  }

  Preimage out{m, {}};
  // Graph block: on the j-th non-tree edge a chip at offset r minus its tail
  // moves the j-th coordinate by r; a whole traversal (head minus tail marked
  // point) moves it by the edge length minus the j-th cycle lift.
  const CycleBasis& basis = frame.basis;
  const HybridLattice base_lattice = hybrid_lattice(m, frame);
  HybridCoordinates removed = HybridCoordinates::zero(m);
  for (int j = 0; j < basis.size(); ++j) {
    const std::size_t e = basis.non_tree_edges[static_cast<std::size_t>(j)];
    const Rational& length = m.graph.edge(e).length;
    const Rational& s = target.gamma(j);
    const Integer q = floor_of(s / length);
    const Rational r = s - Rational(q) * length;
    const HybridPlace tail = HybridPlace::marked_point(m.graph, {e, End::Tail});
    const HybridPlace head = HybridPlace::marked_point(m.graph, {e, End::Head});
    out.divisor.add(HybridPlace::on_edge(m.graph, e, r), 1);
    out.divisor.add(tail, -1);
    out.divisor.add(head, to_int64(Rational(q)));
    out.divisor.add(tail, -to_int64(Rational(q)));
    removed += Rational(q) * base_lattice.cycle_lift(j);
  }

  // Surface blocks: a synthetic point at the required offset from a reference,
  // measured after the removed cycle lifts are put back.
  const HybridCoordinates reached = aj_hybrid(m, frame, out.divisor) + removed;
  for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
    VertexSurface& s = out.complex.surfaces[v];
    if (s.genus == 0) continue;
    const CVector residual = target.blocks[v] - reached.blocks[v];
    if (is_zero(residual)) continue;
    SurfacePointRef ref;
    if (const auto base = s.basepoint_name()) {
      ref = SurfacePointRef::named(*base);
    } else if (!s.marked.empty()) {
      ref = SurfacePointRef::marked(s.marked.begin()->first);
    } else {
      const std::string zero = unused_name(s, "origin");
      s.points[zero] = zero_cvector(static_cast<std::size_t>(s.genus));
      ref = SurfacePointRef::named(zero);
    }
    const std::string name = unused_name(s, "preimage");
    s.points[name] = residual + s.image(ref);
    out.divisor.add(HybridPlace::surface_point(v, SurfacePointRef::named(name)), 1);
    out.divisor.add(HybridPlace::surface_point(v, ref), -1);
  }

  if (!lattice_membership(base_lattice, aj_hybrid(out.complex, frame, out.divisor) - target).member) {
    fail(ErrorCode::InternalDisagreement, "constructed preimage misses the target");
  }
  return out;
}

bool SESReport::all_passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.verdict; });
}

SESReport ses_checks(const MCRS& m, const std::string& fixture, std::span<const HybridDivisor> samples,
                     const NumericMode& mode) {
  SESReport report;
  auto record = [&](std::string property, bool ok, std::string detail) {
    report.entries.push_back({std::move(property), fixture, ok, std::move(detail)});
  };

  // (a) Vertex-supported divisors: principal on the complex iff on the surface.
  {
    bool ok = true;
    std::string detail;
    int checked = 0;
    auto check_vertex_divisor = [&](const MCRS& mm, std::size_t v, const SurfaceDivisor& part,
                                    std::optional<bool> expected) {
      if (part.empty()) return;
      HybridDivisor d;
      for (const auto& [p, c] : part.terms()) d.add(HybridPlace::surface_point(v, p), c);
      const bool on_surface = reduce_mod_lattice(mm.surface(v), aj_surface(mm.surface(v), part), mode).member;
      const bool on_complex = is_principal_hybrid(mm, d, Algorithm::Both, mode).principal;
      ++checked;
      if (on_surface != on_complex || (expected && *expected != on_surface)) {
        ok = false;
        if (detail.empty()) detail = "mismatch on " + describe(mm, d);
      }
    };
    for (const auto& d : samples) {
      for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
        SurfaceDivisor part = surface_part(d, v);
        if (part.empty()) continue;
        if (part.degree() != 0) part.add(part.terms().begin()->first, -part.degree());
        check_vertex_divisor(m, v, part, std::nullopt);
      }
    }
    // A lattice translate and a sixth of one, next to an existing point.
    for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
      const VertexSurface& s = m.surface(v);
      if (s.genus == 0 || (s.points.empty() && s.marked.empty())) continue;
      const SurfacePointRef ref = s.points.empty() ? SurfacePointRef::marked(s.marked.begin()->first)
                                                   : SurfacePointRef::named(s.points.begin()->first);
      MCRS mm = m;
      VertexSurface& ms = mm.surfaces[v];
      const std::string whole = unused_name(ms, "translate");
      ms.points[whole] = s.image(ref) + s.lattice.front();
      const std::string sixth = unused_name(ms, "sixth");
      CVector shifted = s.image(ref);
      ms.points[sixth] = add_scaled(shifted, Rational(1, 6), s.lattice.front());
      SurfaceDivisor yes;
      yes.add(SurfacePointRef::named(whole), 1);
      yes.add(ref, -1);
      SurfaceDivisor no;
      no.add(SurfacePointRef::named(sixth), 1);
      no.add(ref, -1);
      check_vertex_divisor(mm, v, yes, true);
      check_vertex_divisor(mm, v, no, false);
    }
    record("vertex-supported principality matches the surface", ok,
           detail.empty() ? std::to_string(checked) + " divisors" : detail);
  }

  // (b) lift_divisor is a section of gamma_part. A principal lift has a
  // principal graph part. When the graph part is div(f), the lift differs
  // from div(F) (f extended by constants) by the vertex classes
  // ord_v(f) p_v - sum_e s_e x_v^e, so the lift is principal exactly when
  // every sum_e s_e mu(x_v^e) lies in the lattice of X_v.
  const std::string lift_property = "lift is a section; its principality matches the vertex obstruction";
  if (std::all_of(m.surfaces.begin(), m.surfaces.end(), [](const VertexSurface& s) { return s.basepoint_name().has_value(); })) {
    bool ok = true;
    std::string detail;
    int obstructed = 0;
    const PeriodData pd = period_matrix(m.graph);
    for (const auto& d : samples) {
      const TropicalDivisor graph_part = gamma_part(m, d);
      const HybridDivisor lifted = lift_divisor(m, graph_part);
      const TropicalVerdict tv = is_principal_tropical(m.graph, pd, graph_part, mode);
      const bool lift_principal = is_principal_hybrid(m, lifted, Algorithm::Both, mode).principal;
      bool predicted = tv.principal;
      if (tv.principal) {
        for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
          const VertexSurface& s = m.surface(v);
          CVector pull = zero_cvector(static_cast<std::size_t>(s.genus));
          for (const EdgeSlot& slot : m.graph.slots(v)) add_scaled(pull, tv.witness.outgoing_slope(slot), s.marked.at(slot));
          if (!reduce_mod_lattice(s, pull, mode).member) predicted = false;
        }
        if (!predicted) ++obstructed;
      }
      std::string failure;
      if (!(gamma_part(m, lifted) == graph_part)) failure = "not a section on ";
      else if (lift_principal && !tv.principal) failure = "principal lift over a non-principal graph part: ";
      else if (lift_principal != predicted) failure = "lift verdict differs from the vertex obstruction for ";
      if (!failure.empty()) {
        ok = false;
        if (detail.empty()) detail = failure + describe(m, d);
      }
    }
    record(lift_property, ok,
           detail.empty() ? std::to_string(samples.size()) + " divisors, " + std::to_string(obstructed) +
                                " principal graph parts with a non-principal lift"
                          : detail);
  } else {
    record(lift_property, false, "some surface has no named basepoint");
  }

  // Middle exactness: a divisor with principal graph part is equivalent to a
  // vertex-supported one, with the same verdict.
  {
    bool ok = true;
    std::string detail;
    int checked = 0;
    const PeriodData pd = period_matrix(m.graph);
    for (const auto& d : samples) {
      const TropicalVerdict tv = is_principal_tropical(m.graph, pd, gamma_part(m, d), mode);
      if (!tv.principal) continue;
      ++checked;
      const HybridDivisor rest = d - divisor_of_hybrid(m, extend_by_constants(m, tv.witness));
      bool vertex_supported = true;
      for (const auto& [p, c] : rest.terms()) vertex_supported = vertex_supported && p.on_surface();
      for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
        vertex_supported = vertex_supported && surface_part(rest, v).degree() == 0;
      }
      const bool same = vertex_supported && is_principal_hybrid(m, d, Algorithm::Lattice, mode).principal ==
                                                is_principal_hybrid(m, rest, Algorithm::Lattice, mode).principal;
      if (!same) {
        ok = false;
        if (detail.empty()) detail = "failed on " + describe(m, d);
      }
    }
    record("principal graph part reduces to vertex support", ok,
           detail.empty() ? std::to_string(checked) + " divisors" : detail);
  }

  // (c) Base vertex and spanning tree changes move images by lattice elements.
  {
    bool ok = true;
    std::string detail;
    const Frame reference = default_frame(m);
    const HybridLattice reference_lattice = hybrid_lattice(m, reference);
    const std::size_t last = m.graph.vertex_count() - 1;
    const std::vector<std::size_t> alt = alternate_tree_edges(m.graph);
    const std::vector<std::size_t> dflt = [&] {
      std::vector<std::size_t> edges;
      for (std::size_t e = 0; e < m.graph.edge_count(); ++e) {
        if (reference.basis.tree.in_tree[e]) edges.push_back(e);
      }
      return edges;
    }();
    const std::vector<Frame> frames{make_frame(m, last, dflt), make_frame(m, 0, alt), make_frame(m, last, alt)};
    for (const Frame& f : frames) {
      const HybridLattice lattice = hybrid_lattice(m, f);
      for (const auto& gen : reference_lattice.generators) {
        if (!lattice_membership(lattice, change_frame(m, reference, f, gen), mode).member) {
          ok = false;
          if (detail.empty()) detail = "lattice generator not transported";
        }
      }
      for (const auto& d : samples) {
        const HybridCoordinates diff = aj_hybrid(m, f, d) - change_frame(m, reference, f, aj_hybrid(m, reference, d));
        if (!lattice_membership(lattice, diff, mode).member) {
          ok = false;
          if (detail.empty()) detail = "image moved off the lattice for " + describe(m, d);
        }
      }
    }
    record("Abel-Jacobi image independent of base vertex and tree", ok,
           detail.empty() ? std::to_string(frames.size()) + " frames" : detail);
  }
  return report;
}

}  // namespace hybrid_jacobi
