#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybrid_jacobi/mcrs.hpp"

namespace hybrid_jacobi {

/// The choices a hybrid Abel-Jacobi computation depends on: the base vertex
/// and the spanning tree (through its cycle basis). The basepoint of every
/// surface is the implicit point with image 0.
struct Frame {
  std::size_t base_vertex = 0;
  CycleBasis basis;
};

Frame default_frame(const MCRS& m);
Frame make_frame(const MCRS& m, std::size_t base_vertex, std::span<const std::size_t> tree_edges);
/// A spanning tree built greedily from the highest edge index down; differs
/// from the default tree whenever the graph has a cycle.
std::vector<std::size_t> alternate_tree_edges(const MetricGraph& g);

/// One C^{g_v} block per vertex and a real block for the graph cycles.
struct HybridCoordinates {
  std::vector<CVector> blocks;
  VectorQ gamma;

  static HybridCoordinates zero(const MCRS& m);

  HybridCoordinates& operator+=(const HybridCoordinates& o);
  HybridCoordinates& operator-=(const HybridCoordinates& o);
  friend HybridCoordinates operator+(HybridCoordinates a, const HybridCoordinates& b) { return a += b; }
  friend HybridCoordinates operator-(HybridCoordinates a, const HybridCoordinates& b) { return a -= b; }
  friend HybridCoordinates operator*(const Rational& k, const HybridCoordinates& c);
  friend bool operator==(const HybridCoordinates& a, const HybridCoordinates& b);

  /// Blocks in vertex order (real parts then imaginary parts), then gamma.
  VectorQ flatten() const;
  bool is_zero() const;
};

/// Generators of the image of H_1 of the complex: the surface lattices first
/// (vertex order), then one lifted generator per fundamental cycle.
struct HybridLattice {
  Frame frame;
  PeriodData periods;
  std::vector<HybridCoordinates> generators;
  std::size_t surface_generator_count = 0;

  const HybridCoordinates& cycle_lift(std::size_t j) const { return generators.at(surface_generator_count + j); }
  /// Real matrix with one generator per column.
  MatrixQ matrix() const;
};

/// Throws RankDeficient when the generators are not independent.
HybridLattice hybrid_lattice(const MCRS& m, const Frame& frame);
HybridLattice hybrid_lattice(const MCRS& m);

/// 2 * (sum of surface genera) + genus of the graph, checked against the
/// real rank of the lattice.
int homology_rank(const MCRS& m);

/// Image of a single place under the canonical lift from the root basepoint.
HybridCoordinates aj_place(const MCRS& m, const Frame& frame, const HybridPlace& p);
/// Abel-Jacobi image from the basepoint of the base vertex.
HybridCoordinates aj_hybrid(const MCRS& m, const Frame& frame, const HybridDivisor& d);
HybridCoordinates aj_hybrid(const MCRS& m, const HybridDivisor& d);

LatticeMembership lattice_membership(const HybridLattice& lattice, const HybridCoordinates& c,
                                     const NumericMode& mode = NumericMode::exact());

/// Gamma-block change of basis from one frame's cycle forms to another's.
MatrixQ cycle_change_matrix(const MetricGraph& g, const CycleBasis& from, const CycleBasis& to);
/// Re-express coordinates computed in `from` in the cycle forms of `to`.
HybridCoordinates change_frame(const MCRS& m, const Frame& from, const Frame& to, const HybridCoordinates& c);

enum class Algorithm { Lattice, Proof, Both };

struct HybridVerdict {
  bool principal = false;
  std::string reason;  // empty on YES
  Algorithm algorithm = Algorithm::Both;
  /// Graph function whose divisor is the graph part (proof route, YES only).
  std::optional<PLFunction> witness;
  /// Cycle coordinates of the graph block (lattice route).
  VectorQ cycle_coordinates;
  /// Per vertex, coordinates of the surface residue in its lattice.
  std::vector<VectorQ> vertex_coordinates;
};

/// Throws NonzeroDegree, or InternalDisagreement when both routes run and differ.
HybridVerdict is_principal_hybrid(const MCRS& m, const HybridDivisor& d, Algorithm algorithm = Algorithm::Both,
                                  const NumericMode& mode = NumericMode::exact());

/// Graph function extended by constants on every surface.
HybridFunction extend_by_constants(const MCRS& m, const PLFunction& f);

/// Section of gamma_part: vertex chips move to the basepoint of each surface
/// (first named point with image 0). Throws MissingBasepointPoint.
HybridDivisor lift_divisor(const MCRS& m, const TropicalDivisor& d);

struct Preimage {
  MCRS complex;  // the input with synthetic named points added where needed
  HybridDivisor divisor;
};

/// Degree-zero divisor whose image equals the target modulo the lattice.
Preimage aj_preimage(const MCRS& m, const Frame& frame, const HybridCoordinates& target);

struct SESReport {
  struct Entry {
    std::string property;
    std::string fixture;
    bool verdict = false;
    std::string detail;
  };
  std::vector<Entry> entries;

  bool all_passed() const;
};

/// Exactness and splitting checks on one complex, driven by sample divisors.
SESReport ses_checks(const MCRS& m, const std::string& fixture, std::span<const HybridDivisor> samples,
                     const NumericMode& mode = NumericMode::exact());

}  // namespace hybrid_jacobi
