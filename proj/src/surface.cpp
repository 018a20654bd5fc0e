#include "hybrid_jacobi/surface.hpp"

namespace hybrid_jacobi {

namespace {

std::string slot_name(const MetricGraph& g, const EdgeSlot& s) {
  const Edge& e = g.edge(s.edge);
  if (!e.is_loop()) return e.id;
  return e.id + (s.end == End::Tail ? ":tail" : ":head");
}

}  // namespace

std::string describe(const MetricGraph& g, const SurfacePointRef& p) {
  if (p.kind == SurfacePointRef::Kind::Named) return p.name;
  return "x[" + slot_name(g, p.slot) + "]";
}

bool VertexSurface::has_point(const SurfacePointRef& p) const {
  return p.kind == SurfacePointRef::Kind::Marked ? marked.count(p.slot) > 0 : points.count(p.name) > 0;
}

const CVector& VertexSurface::image(const SurfacePointRef& p) const {
  if (p.kind == SurfacePointRef::Kind::Marked) {
    const auto it = marked.find(p.slot);
    if (it == marked.end()) fail(ErrorCode::UnknownPoint, "no marked point for edge slot " + std::to_string(p.slot.edge));
    return it->second;
  }
  const auto it = points.find(p.name);
  if (it == points.end()) fail(ErrorCode::UnknownPoint, "no point named \"" + p.name + "\"");
  return it->second;
}

MatrixQ VertexSurface::lattice_matrix() const {
  const Eigen::Index n = 2 * genus;
  MatrixQ out(n, static_cast<Eigen::Index>(lattice.size()));
  for (std::size_t k = 0; k < lattice.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = realify(lattice[k]);
  return out;
}

std::optional<std::string> VertexSurface::basepoint_name() const {
  for (const auto& [name, z] : points) {
    if (is_zero(z)) return name;
  }
  return std::nullopt;
}

void validate_surface(const VertexSurface& s) {
  if (s.genus < 0) fail(ErrorCode::DimensionMismatch, "negative genus");
  const auto g = static_cast<std::size_t>(s.genus);
  if (s.lattice.size() != 2 * g) {
    fail(ErrorCode::DimensionMismatch, "genus " + std::to_string(g) + " needs " + std::to_string(2 * g) + " lattice vectors");
  }
  for (const auto& v : s.lattice) {
    if (v.size() != g) fail(ErrorCode::DimensionMismatch, "lattice vector of wrong dimension");
  }
  for (const auto& [slot, z] : s.marked) {
    if (z.size() != g) fail(ErrorCode::DimensionMismatch, "marked-point image of wrong dimension");
  }
  for (const auto& [name, z] : s.points) {
    if (z.size() != g) fail(ErrorCode::DimensionMismatch, "image of point \"" + name + "\" has wrong dimension");
  }
  if (g > 0 && linalg::rank<Rational>(s.lattice_matrix()) != static_cast<Eigen::Index>(2 * g)) {
    fail(ErrorCode::DegenerateLattice, "lattice vectors are linearly dependent over R");
  }
}

void validate_surface(const VertexSurface& s, const MetricGraph& g, std::size_t vertex) {
  validate_surface(s);
  const auto& expected = g.slots(vertex);
  bool match = expected.size() == s.marked.size();
  for (const auto& slot : expected) match = match && s.marked.count(slot) > 0;
  if (!match) {
    fail(ErrorCode::MarkedSlotMismatch, "marked points of \"" + g.vertex_id(vertex) + "\" do not match its incident edges");
  }
}

LatticeMembership reduce_mod_lattice(const VertexSurface& s, const CVector& z, const NumericMode& mode) {
  if (z.size() != static_cast<std::size_t>(s.genus)) {
    fail(ErrorCode::DimensionMismatch, "vector in C^" + std::to_string(z.size()) + " for a genus-" + std::to_string(s.genus) + " surface");
  }
  return lattice_membership(s.lattice_matrix(), realify(z), mode);
}

CVector aj_surface(const VertexSurface& s, const SurfaceDivisor& d) {
  CVector out = zero_cvector(static_cast<std::size_t>(s.genus));
  for (const auto& [p, c] : d.terms()) add_scaled(out, Rational(c), s.image(p));
  return out;
}

}  // namespace hybrid_jacobi
