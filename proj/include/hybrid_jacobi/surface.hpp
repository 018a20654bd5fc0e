#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybrid_jacobi/divisor.hpp"
#include "hybrid_jacobi/graph.hpp"
#include "hybrid_jacobi/linalg.hpp"

namespace hybrid_jacobi {

/// A point of a vertex surface: either the marked point of an edge slot or a
/// user-named point.
struct SurfacePointRef {
  enum class Kind { Marked, Named };

  Kind kind = Kind::Named;
  EdgeSlot slot;
  std::string name;

  static SurfacePointRef marked(EdgeSlot s) { return {Kind::Marked, s, {}}; }
  static SurfacePointRef named(std::string n) { return {Kind::Named, {}, std::move(n)}; }

  friend bool operator==(const SurfacePointRef& a, const SurfacePointRef& b) {
    return a.kind == b.kind && (a.kind == Kind::Marked ? a.slot == b.slot : a.name == b.name);
  }
  friend bool operator<(const SurfacePointRef& a, const SurfacePointRef& b) {
    if (a.kind != b.kind) return a.kind == Kind::Marked;
    return a.kind == Kind::Marked ? a.slot < b.slot : a.name < b.name;
  }
};

/// A compact Riemann surface known only through its Jacobian: the period
/// lattice in C^g and the Abel-Jacobi images (relative to an implicit basepoint
/// with image 0) of its marked and named points.
struct VertexSurface {
  int genus = 0;
  std::vector<CVector> lattice;          // 2g vectors in C^g
  std::map<EdgeSlot, CVector> marked;    // edge slot -> image
  std::map<std::string, CVector> points; // name -> image

  /// Throws UnknownPoint.
  const CVector& image(const SurfacePointRef& p) const;
  bool has_point(const SurfacePointRef& p) const;
  /// Real 2g x 2g matrix whose columns are the lattice vectors.
  MatrixQ lattice_matrix() const;
  /// First named point (by name) whose image is zero.
  std::optional<std::string> basepoint_name() const;
};

/// Dimensions and real independence of the lattice.
void validate_surface(const VertexSurface& s);
/// Additionally: the marked slots are exactly the edge slots at `vertex`.
void validate_surface(const VertexSurface& s, const MetricGraph& g, std::size_t vertex);

/// Coordinates of z in the lattice basis; in_lattice when all are integral.
LatticeMembership reduce_mod_lattice(const VertexSurface& s, const CVector& z,
                                     const NumericMode& mode = NumericMode::exact());

using SurfaceDivisor = Divisor<SurfacePointRef>;

/// Sum of coefficient times image.
CVector aj_surface(const VertexSurface& s, const SurfaceDivisor& d);

std::string describe(const MetricGraph& g, const SurfacePointRef& p);

}  // namespace hybrid_jacobi
