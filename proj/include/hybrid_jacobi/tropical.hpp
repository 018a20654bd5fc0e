#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybrid_jacobi/divisor.hpp"
#include "hybrid_jacobi/graph.hpp"

namespace hybrid_jacobi {

using TropicalDivisor = Divisor<GraphPlace>;

std::string describe(const MetricGraph& g, const TropicalDivisor& d);

/// Continuous function on the base graph that is affine on every edge of its
/// model. Members of Rat(graph) have integer slopes; the Laplacian solver may
/// hand out objects that do not (see has_integer_slopes).
class PLFunction {
 public:
  PLFunction() = default;
  PLFunction(Refinement model, std::vector<Rational> values);

  /// Constant function on the unrefined base graph.
  static PLFunction constant(const MetricGraph& base, const Rational& value);
  /// Values at base vertices and arbitrary breakpoints; affine in between.
  /// Every base vertex needs a value.
  static PLFunction from_breakpoints(const MetricGraph& base, const std::map<GraphPlace, Rational>& values);

  const Refinement& model() const { return model_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& value(std::size_t refined_vertex) const { return values_.at(refined_vertex); }

  /// (value(head) - value(tail)) / length on a model edge.
  Rational slope(std::size_t refined_edge) const;
  bool has_integer_slopes() const;
  /// Value at any place of the base graph.
  Rational value_at(const GraphPlace& base_place) const;
  /// Slope leaving the given end of a base edge, pointing into the edge.
  Rational outgoing_slope(const EdgeSlot& base_slot) const;

  /// Breakpoints of the model expressed on the base graph.
  const std::vector<GraphPlace>& breakpoints() const { return model_.vertex_place; }

 private:
  Refinement model_;
  std::vector<Rational> values_;
};

/// Pointwise combinations over a common refinement of the base graph.
PLFunction add(const MetricGraph& base, const PLFunction& a, const PLFunction& b);
PLFunction scale(const PLFunction& f, const Rational& k);
PLFunction shift(const PLFunction& f, const Rational& c);
/// Restate f on base refined at the given places.
PLFunction resample(const MetricGraph& base, const PLFunction& f, std::span<const GraphPlace> places);
/// Exact equality of functions (not of models).
bool same_function(const MetricGraph& base, const PLFunction& a, const PLFunction& b);

/// Sum of outgoing slopes at every model vertex. Throws NonIntegerSlope.
TropicalDivisor divisor_of_pl(const PLFunction& f);

/// Fundamental-cycle basis with the Gram matrix of the cycles under the
/// edge-length inner product. Jac(graph) = R^g / M Z^g in the dual basis.
struct PeriodData {
  CycleBasis basis;
  MatrixQ gram;
};

PeriodData period_matrix(const MetricGraph& g);
PeriodData period_matrix(const MetricGraph& g, CycleBasis basis);

/// Integral of the cycle forms along the tree path from the root to p.
VectorQ root_integral(const MetricGraph& g, const CycleBasis& basis, const GraphPlace& p);
/// Integral of the cycle forms along an arbitrary chain.
VectorQ chain_integral(const MetricGraph& g, const CycleBasis& basis, const SignedEdgeChain& chain);

/// Representative of the Abel-Jacobi image of D (paths from the basepoint).
VectorQ aj_tropical(const MetricGraph& g, const PeriodData& pd, const TropicalDivisor& d,
                    const GraphPlace& basepoint);

struct TropicalVerdict {
  bool principal = false;
  /// Solution x of M x = AJ(D); integral iff principal.
  VectorQ lattice_coordinates;
  /// Vertex potentials of the Laplacian route on the model refined at supp(D);
  /// an element of Rat(graph) with div = D whenever principal.
  PLFunction witness;
  std::string reason;
};

/// Lattice route only.
bool principal_by_lattice(const MetricGraph& g, const PeriodData& pd, const TropicalDivisor& d,
                          const NumericMode& mode, VectorQ* coordinates = nullptr);
/// Laplacian route only: solve for potentials with the prescribed orders and
/// test slope integrality.
bool principal_by_laplacian(const MetricGraph& g, const TropicalDivisor& d, const NumericMode& mode,
                            PLFunction* potentials = nullptr);

/// Both routes, asserted to agree (InternalDisagreement otherwise).
TropicalVerdict is_principal_tropical(const MetricGraph& g, const PeriodData& pd, const TropicalDivisor& d,
                                      const NumericMode& mode = NumericMode::exact());

/// Constant `low` on one closed subgraph, `high` on a disjoint one, affine with
/// integer slope along the segments joining them.
struct ChipFiringMove {
  enum class Side { Low, High, Between };

  Refinement model;
  std::vector<Rational> values;  // per model vertex
  std::vector<Side> sides;       // per model vertex
  Rational low;
  Rational high;

  PLFunction as_function() const { return PLFunction(model, values); }
  /// Checks the move conditions directly on the stored data; on failure the
  /// reason is written to `why`.
  bool satisfies_invariants(std::string* why = nullptr) const;
};

/// Level cut of f at its corner values; one move per connected component of
/// each superlevel plateau. The moves sum to f - min(f).
std::vector<ChipFiringMove> decompose_chip_firing(const MetricGraph& base, const PLFunction& f);

}  // namespace hybrid_jacobi
