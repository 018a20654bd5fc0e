#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybrid_jacobi/numeric.hpp"

namespace hybrid_jacobi {

/// Which end of an oriented edge: the tail e+ or the head e-.
enum class End { Tail, Head };

struct EdgeSpec {
  std::string id;
  std::string from;
  std::string to;
  Rational length;
};

struct Edge {
  std::string id;
  std::size_t tail = 0;
  std::size_t head = 0;
  Rational length;

  bool is_loop() const { return tail == head; }
  std::size_t endpoint(End end) const { return end == End::Tail ? tail : head; }
};

/// One end of an edge as seen from the vertex it is attached to. Loops
/// contribute two slots at their vertex.
struct EdgeSlot {
  std::size_t edge = 0;
  End end = End::Tail;

  friend bool operator==(const EdgeSlot&, const EdgeSlot&) = default;
  friend bool operator<(const EdgeSlot& a, const EdgeSlot& b) {
    return a.edge != b.edge ? a.edge < b.edge : (a.end == End::Tail && b.end == End::Head);
  }
};

/// Finite connected model of a compact metric graph. Orientation is the input
/// order (tail -> head) and never changes after construction.
class MetricGraph {
 public:
  /// Validates ids, lengths and connectivity.
  static MetricGraph build(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges);

  std::size_t vertex_count() const { return vertex_ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& vertex_id(std::size_t v) const { return vertex_ids_.at(v); }
  const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<std::size_t> find_vertex(const std::string& id) const;
  std::optional<std::size_t> find_edge(const std::string& id) const;
  std::size_t vertex_index(const std::string& id) const;
  std::size_t edge_index(const std::string& id) const;

  /// Edge slots at v ordered by edge index, tail slot before head slot.
  const std::vector<EdgeSlot>& slots(std::size_t v) const { return slots_.at(v); }
  std::size_t valency(std::size_t v) const { return slots_.at(v).size(); }
  std::size_t slot_vertex(const EdgeSlot& s) const { return edge(s.edge).endpoint(s.end); }

  /// |E| - |V| + 1.
  int genus() const;

 private:
  std::vector<std::string> vertex_ids_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeSlot>> slots_;
};

/// A point of the geometric realization: a model vertex, or a point strictly
/// inside an edge at a given distance from its tail.
class GraphPlace {
 public:
  GraphPlace() = default;
  static GraphPlace at_vertex(std::size_t v);
  /// Normalizes offsets 0 and length to the endpoint vertices; throws
  /// PlaceOffGraph outside [0, length].
  static GraphPlace on_edge(const MetricGraph& g, std::size_t e, const Rational& offset);
  /// No normalization: the caller guarantees 0 < offset < length(e).
  static GraphPlace interior(std::size_t e, Rational offset);

  bool is_vertex() const { return is_vertex_; }
  std::size_t vertex() const { return index_; }
  std::size_t edge() const { return index_; }
  const Rational& offset() const { return offset_; }

  /// Throws PlaceOffGraph if the place does not exist on g.
  void check_on(const MetricGraph& g) const;

  friend bool operator==(const GraphPlace& a, const GraphPlace& b) {
    return a.is_vertex_ == b.is_vertex_ && a.index_ == b.index_ && a.offset_ == b.offset_;
  }
  friend bool operator<(const GraphPlace& a, const GraphPlace& b) {
    if (a.is_vertex_ != b.is_vertex_) return a.is_vertex_;
    if (a.index_ != b.index_) return a.index_ < b.index_;
    return a.offset_ < b.offset_;
  }

 private:
  bool is_vertex_ = true;
  std::size_t index_ = 0;
  Rational offset_;
};

std::string describe(const MetricGraph& g, const GraphPlace& p);

/// Traversal of edge `edge` from offset `from` to offset `to` (both measured
/// from the tail).
struct ChainSegment {
  std::size_t edge = 0;
  Rational from;
  Rational to;

  int direction() const { return to > from ? 1 : -1; }
};

/// A piecewise path in the graph as a list of edge traversals.
struct SignedEdgeChain {
  GraphPlace start;
  GraphPlace end;
  std::vector<ChainSegment> segments;

  /// Net signed length traversed on each edge.
  VectorQ edge_lengths(const MetricGraph& g) const;
};

/// Spanning tree stored as parent pointers from a root.
struct SpanningTree {
  std::size_t root = 0;
  std::vector<bool> in_tree;                       // per edge
  std::vector<std::optional<std::size_t>> parent_edge;  // per vertex
  std::vector<std::size_t> parent;                 // per vertex (root points to itself)
  std::vector<std::size_t> depth;                  // per vertex
};

/// Fundamental cycles of a spanning tree. Row j of `cycles` is the cycle of
/// the j-th non-tree edge: +1 on it, +-1 along the tree path closing it.
struct CycleBasis {
  SpanningTree tree;
  std::vector<std::size_t> non_tree_edges;
  Eigen::MatrixXi cycles;  // genus x |E|

  int size() const { return static_cast<int>(non_tree_edges.size()); }
};

/// Deterministic basis: DFS from vertex 0 taking incident edges by index.
CycleBasis cycle_basis(const MetricGraph& g);
/// Basis of a caller-chosen spanning tree (rooted at vertex 0).
CycleBasis cycle_basis(const MetricGraph& g, std::span<const std::size_t> tree_edges);

/// Steps (edge, +1 along orientation / -1 against) of the tree path between
/// two vertices.
std::vector<std::pair<std::size_t, int>> tree_vertex_path(const MetricGraph& g, const SpanningTree& t,
                                                          std::size_t from, std::size_t to);

/// Path from `from` to `to` along the tree, entering an edge-interior endpoint
/// from the tail of its edge. Consecutive traversals of the same edge are
/// merged, so tree_path(p, p) is empty.
SignedEdgeChain tree_path(const MetricGraph& g, const CycleBasis& basis, const GraphPlace& from,
                          const GraphPlace& to);

/// A refined model of a base graph with the bookkeeping to move places
/// between the two models.
struct Refinement {
  struct Piece {
    std::size_t base_edge = 0;
    Rational from;  // offsets on the base edge, from < to
    Rational to;
  };

  MetricGraph graph;
  std::vector<GraphPlace> vertex_place;                // refined vertex -> base place
  std::vector<Piece> pieces;                           // refined edge -> base segment
  std::vector<std::vector<std::size_t>> edge_pieces;   // base edge -> refined edges in order

  /// Identity refinement.
  static Refinement identity(const MetricGraph& base);

  GraphPlace to_base(const GraphPlace& refined) const;
  /// Throws PlaceOffGraph if `base` is not represented in this model.
  GraphPlace to_refined(const GraphPlace& base) const;
  /// Refined vertex sitting at a base place, if any.
  std::optional<std::size_t> vertex_at(const GraphPlace& base) const;
};

/// Subdivide the edges of g so that every requested place becomes a vertex.
/// Base vertices keep their indices; new vertices follow ordered by (edge,
/// offset). Unsplit edges keep their ids.
Refinement refine(const MetricGraph& g, std::span<const GraphPlace> places);

}  // namespace hybrid_jacobi
