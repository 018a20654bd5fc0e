#include "hybrid_jacobi/mcrs.hpp"

#include <sstream>

namespace hybrid_jacobi {

int MCRS::surface_genus_total() const {
  int total = 0;
  for (const auto& s : surfaces) total += s.genus;
  return total;
}

MCRS build_mcrs(MetricGraph graph, std::map<std::string, VertexSurface> surfaces) {
  MCRS m;
  for (const auto& [id, s] : surfaces) {
    if (!graph.find_vertex(id)) fail(ErrorCode::UnknownId, "surface given for unknown vertex \"" + id + "\"");
  }
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    const auto it = surfaces.find(graph.vertex_id(v));
    if (it == surfaces.end()) fail(ErrorCode::SlotBijectionBroken, "vertex \"" + graph.vertex_id(v) + "\" has no surface");
    try {
      validate_surface(it->second, graph, v);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MarkedSlotMismatch) throw;
      fail(ErrorCode::SlotBijectionBroken, e.what());
    }
    m.surfaces.push_back(std::move(it->second));
  }
  m.graph = std::move(graph);
  m.genus = m.surface_genus_total() + m.graph.genus();
  return m;
}

HybridPlace HybridPlace::surface_point(std::size_t v, SurfacePointRef p) {
  HybridPlace out;
  out.kind_ = Kind::Surface;
  out.vertex_ = v;
  out.point_ = std::move(p);
  return out;
}

HybridPlace HybridPlace::marked_point(const MetricGraph& g, EdgeSlot slot) {
  return surface_point(g.slot_vertex(slot), SurfacePointRef::marked(slot));
}

HybridPlace HybridPlace::on_edge(const MetricGraph& g, std::size_t e, const Rational& offset) {
  if (e >= g.edge_count()) fail(ErrorCode::PlaceOffComplex, "edge index out of range");
  const Rational& length = g.edge(e).length;
  if (offset < 0 || offset > length) {
    fail(ErrorCode::PlaceOffComplex, "offset " + format_rational(offset) + " outside edge \"" + g.edge(e).id + "\"");
  }
  if (offset == 0) return marked_point(g, {e, End::Tail});
  if (offset == length) return marked_point(g, {e, End::Head});
  HybridPlace out;
  out.kind_ = Kind::Edge;
  out.edge_ = e;
  out.offset_ = offset;
  return out;
}

void HybridPlace::check_on(const MCRS& m) const {
  if (kind_ == Kind::Edge) {
    if (edge_ >= m.graph.edge_count() || offset_ <= 0 || offset_ >= m.graph.edge(edge_).length) {
      fail(ErrorCode::PlaceOffComplex, "edge place not in the interior of an edge");
    }
    return;
  }
  if (vertex_ >= m.graph.vertex_count()) fail(ErrorCode::PlaceOffComplex, "vertex index out of range");
  if (point_.kind == SurfacePointRef::Kind::Marked) {
    if (point_.slot.edge >= m.graph.edge_count() || m.graph.slot_vertex(point_.slot) != vertex_) {
      fail(ErrorCode::PlaceOffComplex, "marked point does not belong to vertex \"" + m.graph.vertex_id(vertex_) + "\"");
    }
    return;
  }
  if (!m.surface(vertex_).has_point(point_)) {
    fail(ErrorCode::UnknownPoint, "no point \"" + point_.name + "\" on the surface at \"" + m.graph.vertex_id(vertex_) + "\"");
  }
}

bool operator==(const HybridPlace& a, const HybridPlace& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == HybridPlace::Kind::Edge) return a.edge_ == b.edge_ && a.offset_ == b.offset_;
  return a.vertex_ == b.vertex_ && a.point_ == b.point_;
}

bool operator<(const HybridPlace& a, const HybridPlace& b) {
  if (a.kind_ != b.kind_) return a.kind_ == HybridPlace::Kind::Surface;
  if (a.kind_ == HybridPlace::Kind::Edge) {
    if (a.edge_ != b.edge_) return a.edge_ < b.edge_;
    return a.offset_ < b.offset_;
  }
  if (a.vertex_ != b.vertex_) return a.vertex_ < b.vertex_;
  return a.point_ < b.point_;
}

std::string describe(const MCRS& m, const HybridPlace& p) {
  if (!p.on_surface()) return m.graph.edge(p.edge()).id + "@" + format_rational(p.offset());
  return m.graph.vertex_id(p.vertex()) + ":" + describe(m.graph, p.point());
}

std::string describe(const MCRS& m, const HybridDivisor& d) {
  if (d.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : d.terms()) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const auto magnitude = c < 0 ? -c : c;
    if (magnitude != 1) os << magnitude << "*";
    os << "(" << describe(m, p) << ")";
  }
  return os.str();
}

SurfaceDivisor surface_part(const HybridDivisor& d, std::size_t v) {
  SurfaceDivisor out;
  for (const auto& [p, c] : d.terms()) {
    if (p.on_surface() && p.vertex() == v) out.add(p.point(), c);
  }
  return out;
}

TropicalDivisor gamma_part(const MCRS& m, const HybridDivisor& d) {
  TropicalDivisor out;
  for (const auto& [p, c] : d.terms()) {
    if (p.on_surface()) out.add(GraphPlace::at_vertex(p.vertex()), c);
    else out.add(GraphPlace::on_edge(m.graph, p.edge(), p.offset()), c);
  }
  return out;
}

HybridFunction HybridFunction::constant(const MCRS& m, const Rational& value) {
  return {PLFunction::constant(m.graph, value), std::vector<SurfaceDivisor>(m.graph.vertex_count())};
}

void validate_function(const MCRS& m, const HybridFunction& f, const NumericMode& mode) {
  if (f.vertex_classes.size() != m.graph.vertex_count()) {
    fail(ErrorCode::DimensionMismatch, "one vertex class per vertex expected");
  }
  if (!f.graph_part.has_integer_slopes()) fail(ErrorCode::NonIntegerSlope, "graph part has a non-integer slope");
  for (std::size_t v = 0; v < f.vertex_classes.size(); ++v) {
    const SurfaceDivisor& cls = f.vertex_classes[v];
    const std::string& id = m.graph.vertex_id(v);
    if (cls.degree() != 0) fail(ErrorCode::NonzeroDegree, "vertex class at \"" + id + "\" has nonzero degree");
    const VertexSurface& s = m.surface(v);
    for (const auto& [p, c] : cls.terms()) HybridPlace::surface_point(v, p).check_on(m);
    if (s.genus == 0) continue;
    if (!reduce_mod_lattice(s, aj_surface(s, cls), mode).member) {
      fail(ErrorCode::InvalidFunction, "vertex class at \"" + id + "\" is not the divisor of a function");
    }
  }
}

HybridDivisor divisor_of_hybrid(const MCRS& m, const HybridFunction& f) {
  HybridDivisor out;
  for (std::size_t v = 0; v < f.vertex_classes.size(); ++v) {
    for (const auto& [p, c] : f.vertex_classes[v].terms()) out.add(HybridPlace::surface_point(v, p), c);
  }
  const PLFunction& fg = f.graph_part;
  const Refinement& model = fg.model();
  const MetricGraph& mg = model.graph;
  std::vector<Rational> order(mg.vertex_count(), Rational(0));
  for (std::size_t e = 0; e < mg.edge_count(); ++e) {
    const Rational s = fg.slope(e);
    if (!is_integer(s)) {
      fail(ErrorCode::NonIntegerSlope, "slope " + format_rational(s) + " on model edge \"" + mg.edge(e).id + "\"");
    }
    order[mg.edge(e).tail] += s;
    order[mg.edge(e).head] -= s;
  }
  // Interior breakpoints carry the order of the graph part.
  for (std::size_t v = 0; v < mg.vertex_count(); ++v) {
    const GraphPlace& p = model.vertex_place[v];
    if (p.is_vertex()) continue;
    out.add(HybridPlace::on_edge(m.graph, p.edge(), p.offset()), to_int64(order[v]));
  }
  // At each marked point the outward slope along its edge.
  for (std::size_t e = 0; e < m.graph.edge_count(); ++e) {
    for (End end : {End::Tail, End::Head}) {
      const EdgeSlot slot{e, end};
      out.add(HybridPlace::marked_point(m.graph, slot), to_int64(fg.outgoing_slope(slot)));
    }
  }
  if (out.degree() != 0) fail(ErrorCode::InternalDisagreement, "divisor of a hybrid function has nonzero degree");
  return out;
}

namespace {

EdgeSlot refined_slot(const Refinement& r, const EdgeSlot& slot) {
  const auto& pieces = r.edge_pieces.at(slot.edge);
  return slot.end == End::Tail ? EdgeSlot{pieces.front(), End::Tail} : EdgeSlot{pieces.back(), End::Head};
}

}  // namespace

RefinedComplex refine_complex(const MCRS& m, std::span<const GraphPlace> places) {
  Refinement r = refine(m.graph, places);
  const MetricGraph& g = r.graph;
  std::map<std::string, VertexSurface> surfaces;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexSurface s;
    if (v < m.graph.vertex_count()) {
      const VertexSurface& old = m.surface(v);
      s.genus = old.genus;
      s.lattice = old.lattice;
      s.points = old.points;
      for (const auto& [slot, z] : old.marked) s.marked[refined_slot(r, slot)] = z;
    } else {
      for (const auto& slot : g.slots(v)) s.marked[slot] = CVector{};
    }
    surfaces[g.vertex_id(v)] = std::move(s);
  }
  return {build_mcrs(r.graph, std::move(surfaces)), std::move(r)};
}

HybridPlace RefinedComplex::to_refined(const HybridPlace& p) const {
  if (p.on_surface()) {
    if (!p.is_marked()) return p;
    return HybridPlace::surface_point(p.vertex(), SurfacePointRef::marked(refined_slot(refinement, p.point().slot)));
  }
  // A cut point is now a sphere; every point of a sphere is equivalent, so any
  // of its marked points represents it.
  const GraphPlace q = refinement.to_refined(GraphPlace::interior(p.edge(), p.offset()));
  if (q.is_vertex()) {
    return HybridPlace::surface_point(q.vertex(), SurfacePointRef::marked(complex.graph.slots(q.vertex()).front()));
  }
  return HybridPlace::on_edge(complex.graph, q.edge(), q.offset());
}

HybridDivisor RefinedComplex::to_refined(const HybridDivisor& d) const {
  HybridDivisor out;
  for (const auto& [p, c] : d.terms()) out.add(to_refined(p), c);
  return out;
}

}  // namespace hybrid_jacobi
