#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hybrid_jacobi/surface.hpp"
#include "hybrid_jacobi/tropical.hpp"

namespace hybrid_jacobi {

/// Metric graph with a Riemann surface (through its Jacobian data) at every
/// vertex.
struct MCRS {
  MetricGraph graph;
  std::vector<VertexSurface> surfaces;  // indexed like graph vertices
  int genus = 0;                        // sum of surface genera plus genus of the graph

  const VertexSurface& surface(std::size_t v) const { return surfaces.at(v); }
  int surface_genus_total() const;
};

/// Throws SlotBijectionBroken when a surface's marked points do not match the
/// incident edge slots, plus whatever surface validation throws.
MCRS build_mcrs(MetricGraph graph, std::map<std::string, VertexSurface> surfaces);

/// A point of the complex: on a vertex surface or in the interior of an edge.
class HybridPlace {
 public:
  enum class Kind { Surface, Edge };

  HybridPlace() = default;
  static HybridPlace surface_point(std::size_t v, SurfacePointRef p);
  static HybridPlace marked_point(const MetricGraph& g, EdgeSlot slot);
  /// Offsets 0 and the edge length become the marked points at the ends.
  static HybridPlace on_edge(const MetricGraph& g, std::size_t e, const Rational& offset);

  Kind kind() const { return kind_; }
  bool on_surface() const { return kind_ == Kind::Surface; }
  bool is_marked() const { return on_surface() && point_.kind == SurfacePointRef::Kind::Marked; }
  std::size_t vertex() const { return vertex_; }
  const SurfacePointRef& point() const { return point_; }
  std::size_t edge() const { return edge_; }
  const Rational& offset() const { return offset_; }

  /// Throws PlaceOffComplex.
  void check_on(const MCRS& m) const;

  friend bool operator==(const HybridPlace& a, const HybridPlace& b);
  friend bool operator<(const HybridPlace& a, const HybridPlace& b);

 private:
  Kind kind_ = Kind::Surface;
  std::size_t vertex_ = 0;
  SurfacePointRef point_;
  std::size_t edge_ = 0;
  Rational offset_;
};

using HybridDivisor = Divisor<HybridPlace>;

std::string describe(const MCRS& m, const HybridPlace& p);
std::string describe(const MCRS& m, const HybridDivisor& d);

/// Part of a hybrid divisor living on one vertex surface.
SurfaceDivisor surface_part(const HybridDivisor& d, std::size_t v);

/// Edge interiors copied, each vertex gets the degree of its surface part.
TropicalDivisor gamma_part(const MCRS& m, const HybridDivisor& d);

/// A rational function on the complex, stored as its graph part together with
/// the divisor of each surface function.
struct HybridFunction {
  PLFunction graph_part;
  std::vector<SurfaceDivisor> vertex_classes;  // indexed like graph vertices

  static HybridFunction constant(const MCRS& m, const Rational& value = Rational(0));
};

/// Degree zero and lattice-trivial image for every vertex class, integer slopes.
void validate_function(const MCRS& m, const HybridFunction& f, const NumericMode& mode = NumericMode::exact());

/// Ord formula: at a marked point the vertex-class order plus the outward
/// slope of the graph part along that edge.
HybridDivisor divisor_of_hybrid(const MCRS& m, const HybridFunction& f);

/// The complex over a subdivided graph: new vertices carry genus-0 surfaces.
struct RefinedComplex {
  MCRS complex;
  Refinement refinement;

  HybridPlace to_refined(const HybridPlace& p) const;
  HybridDivisor to_refined(const HybridDivisor& d) const;
};

RefinedComplex refine_complex(const MCRS& m, std::span<const GraphPlace> places);

}  // namespace hybrid_jacobi
