#include "hybrid_jacobi/graph.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace hybrid_jacobi {

MetricGraph MetricGraph::build(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges) {
  MetricGraph g;
  if (vertices.empty()) fail(ErrorCode::Disconnected, "graph has no vertices");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!index.emplace(vertices[i], i).second) fail(ErrorCode::DuplicateId, "vertex \"" + vertices[i] + "\"");
  }
  g.vertex_ids_ = std::move(vertices);
  g.slots_.resize(g.vertex_ids_.size());
  std::set<std::string> edge_ids;
  for (const auto& spec : edges) {
    if (!edge_ids.insert(spec.id).second) fail(ErrorCode::DuplicateId, "edge \"" + spec.id + "\"");
    if (spec.length <= 0) fail(ErrorCode::NonpositiveLength, "edge \"" + spec.id + "\"");
    const auto tail = index.find(spec.from);
    const auto head = index.find(spec.to);
    if (tail == index.end()) fail(ErrorCode::UnknownId, "edge \"" + spec.id + "\" starts at unknown vertex \"" + spec.from + "\"");
    if (head == index.end()) fail(ErrorCode::UnknownId, "edge \"" + spec.id + "\" ends at unknown vertex \"" + spec.to + "\"");
    const std::size_t e = g.edges_.size();
    g.edges_.push_back(Edge{spec.id, tail->second, head->second, spec.length});
    g.slots_[tail->second].push_back(EdgeSlot{e, End::Tail});
    g.slots_[head->second].push_back(EdgeSlot{e, End::Head});
  }

  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (const auto& slot : g.slots_[v]) {
      const Edge& e = g.edges_[slot.edge];
      const std::size_t w = slot.end == End::Tail ? e.head : e.tail;
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != g.vertex_count()) {
    const auto it = std::find(seen.begin(), seen.end(), false);
    fail(ErrorCode::Disconnected,
         "vertex \"" + g.vertex_ids_[static_cast<std::size_t>(it - seen.begin())] + "\" is unreachable");
  }
  return g;
}

std::optional<std::size_t> MetricGraph::find_vertex(const std::string& id) const {
  const auto it = std::find(vertex_ids_.begin(), vertex_ids_.end(), id);
  if (it == vertex_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vertex_ids_.begin());
}

std::optional<std::size_t> MetricGraph::find_edge(const std::string& id) const {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].id == id) return e;
  }
  return std::nullopt;
}

std::size_t MetricGraph::vertex_index(const std::string& id) const {
  if (auto v = find_vertex(id)) return *v;
  fail(ErrorCode::UnknownId, "no vertex \"" + id + "\"");
}

std::size_t MetricGraph::edge_index(const std::string& id) const {
  if (auto e = find_edge(id)) return *e;
  fail(ErrorCode::UnknownId, "no edge \"" + id + "\"");
}

int MetricGraph::genus() const {
  return static_cast<int>(edges_.size()) - static_cast<int>(vertex_ids_.size()) + 1;
}

GraphPlace GraphPlace::at_vertex(std::size_t v) {
  GraphPlace p;
  p.is_vertex_ = true;
  p.index_ = v;
  return p;
}

GraphPlace GraphPlace::interior(std::size_t e, Rational offset) {
  GraphPlace p;
  p.is_vertex_ = false;
  p.index_ = e;
  p.offset_ = std::move(offset);
  return p;
}

GraphPlace GraphPlace::on_edge(const MetricGraph& g, std::size_t e, const Rational& offset) {
  if (e >= g.edge_count()) fail(ErrorCode::PlaceOffGraph, "edge index out of range");
  const Edge& edge = g.edge(e);
  if (offset < 0 || offset > edge.length) {
    fail(ErrorCode::PlaceOffGraph, "offset " + format_rational(offset) + " outside edge \"" + edge.id + "\"");
  }
  if (offset == 0) return at_vertex(edge.tail);
  if (offset == edge.length) return at_vertex(edge.head);
  return interior(e, offset);
}

void GraphPlace::check_on(const MetricGraph& g) const {
  if (is_vertex_) {
    if (index_ >= g.vertex_count()) fail(ErrorCode::PlaceOffGraph, "vertex index out of range");
    return;
  }
  if (index_ >= g.edge_count()) fail(ErrorCode::PlaceOffGraph, "edge index out of range");
  if (offset_ <= 0 || offset_ >= g.edge(index_).length) {
    fail(ErrorCode::PlaceOffGraph, "offset not interior to edge \"" + g.edge(index_).id + "\"");
  }
}

std::string describe(const MetricGraph& g, const GraphPlace& p) {
  if (p.is_vertex()) return g.vertex_id(p.vertex());
  return g.edge(p.edge()).id + "@" + format_rational(p.offset());
}

VectorQ SignedEdgeChain::edge_lengths(const MetricGraph& g) const {
  VectorQ out = zero_vector(static_cast<Eigen::Index>(g.edge_count()));
  for (const auto& s : segments) out(static_cast<Eigen::Index>(s.edge)) += s.to - s.from;
  return out;
}

namespace {

void dfs_tree(const MetricGraph& g, std::size_t v, SpanningTree& t, std::vector<bool>& seen) {
  for (const auto& slot : g.slots(v)) {
    const Edge& e = g.edge(slot.edge);
    if (e.is_loop()) continue;
    const std::size_t w = slot.end == End::Tail ? e.head : e.tail;
    if (seen[w]) continue;
    seen[w] = true;
    t.in_tree[slot.edge] = true;
    t.parent[w] = v;
    t.parent_edge[w] = slot.edge;
    t.depth[w] = t.depth[v] + 1;
    dfs_tree(g, w, t, seen);
  }
}

SpanningTree empty_tree(const MetricGraph& g) {
  SpanningTree t;
  t.root = 0;
  t.in_tree.assign(g.edge_count(), false);
  t.parent_edge.assign(g.vertex_count(), std::nullopt);
  t.parent.assign(g.vertex_count(), 0);
  t.depth.assign(g.vertex_count(), 0);
  return t;
}

CycleBasis basis_from_tree(const MetricGraph& g, SpanningTree tree) {
  CycleBasis b;
  b.tree = std::move(tree);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!b.tree.in_tree[e]) b.non_tree_edges.push_back(e);
  }
  b.cycles = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(b.non_tree_edges.size()),
                                   static_cast<Eigen::Index>(g.edge_count()));
  for (std::size_t j = 0; j < b.non_tree_edges.size(); ++j) {
    const std::size_t e = b.non_tree_edges[j];
    const auto row = static_cast<Eigen::Index>(j);
    b.cycles(row, static_cast<Eigen::Index>(e)) += 1;
    for (const auto& [step, dir] : tree_vertex_path(g, b.tree, g.edge(e).head, g.edge(e).tail)) {
      b.cycles(row, static_cast<Eigen::Index>(step)) += dir;
    }
  }
  return b;
}

}  // namespace

CycleBasis cycle_basis(const MetricGraph& g) {
  SpanningTree t = empty_tree(g);
  std::vector<bool> seen(g.vertex_count(), false);
  seen[0] = true;
  dfs_tree(g, 0, t, seen);
  return basis_from_tree(g, std::move(t));
}

CycleBasis cycle_basis(const MetricGraph& g, std::span<const std::size_t> tree_edges) {
  if (tree_edges.size() + 1 != g.vertex_count()) {
    fail(ErrorCode::DimensionMismatch, "a spanning tree needs |V| - 1 edges");
  }
  SpanningTree t = empty_tree(g);
  for (std::size_t e : tree_edges) {
    if (e >= g.edge_count() || g.edge(e).is_loop() || t.in_tree[e]) {
      fail(ErrorCode::DimensionMismatch, "invalid spanning-tree edge list");
    }
    t.in_tree[e] = true;
  }
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t v = queue[head];
    for (const auto& slot : g.slots(v)) {
      if (!t.in_tree[slot.edge]) continue;
      const Edge& e = g.edge(slot.edge);
      const std::size_t w = slot.end == End::Tail ? e.head : e.tail;
      if (seen[w]) continue;
      seen[w] = true;
      t.parent[w] = v;
      t.parent_edge[w] = slot.edge;
      t.depth[w] = t.depth[v] + 1;
      queue.push_back(w);
    }
  }
  if (queue.size() != g.vertex_count()) fail(ErrorCode::DimensionMismatch, "edge list is not a spanning tree");
  return basis_from_tree(g, std::move(t));
}

std::vector<std::pair<std::size_t, int>> tree_vertex_path(const MetricGraph& g, const SpanningTree& t,
                                                          std::size_t from, std::size_t to) {
  std::vector<std::pair<std::size_t, int>> up;
  std::vector<std::pair<std::size_t, int>> down;
  std::size_t a = from;
  std::size_t b = to;
  // Moving child -> parent along e is +1 when the child is the tail.
  auto climb = [&](std::size_t& x, std::vector<std::pair<std::size_t, int>>& out, bool reversed) {
    const std::size_t e = *t.parent_edge[x];
    const int child_to_parent = g.edge(e).tail == x ? 1 : -1;
    out.emplace_back(e, reversed ? -child_to_parent : child_to_parent);
    x = t.parent[x];
  };
  while (t.depth[a] > t.depth[b]) climb(a, up, false);
  while (t.depth[b] > t.depth[a]) climb(b, down, true);
  while (a != b) {
    climb(a, up, false);
    climb(b, down, true);
  }
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

SignedEdgeChain tree_path(const MetricGraph& g, const CycleBasis& basis, const GraphPlace& from,
                          const GraphPlace& to) {
  from.check_on(g);
  to.check_on(g);
  SignedEdgeChain chain{from, to, {}};
  auto anchor = [&](const GraphPlace& p) { return p.is_vertex() ? p.vertex() : g.edge(p.edge()).tail; };

  std::vector<ChainSegment> raw;
  if (!from.is_vertex()) raw.push_back({from.edge(), from.offset(), Rational(0)});
  for (const auto& [e, dir] : tree_vertex_path(g, basis.tree, anchor(from), anchor(to))) {
    const Rational& len = g.edge(e).length;
    raw.push_back(dir > 0 ? ChainSegment{e, Rational(0), len} : ChainSegment{e, len, Rational(0)});
  }
  if (!to.is_vertex()) raw.push_back({to.edge(), Rational(0), to.offset()});

  for (auto& seg : raw) {
    if (!chain.segments.empty() && chain.segments.back().edge == seg.edge && chain.segments.back().to == seg.from) {
      chain.segments.back().to = seg.to;
      if (chain.segments.back().from == chain.segments.back().to) chain.segments.pop_back();
      continue;
    }
    chain.segments.push_back(std::move(seg));
  }
  return chain;
}

Refinement Refinement::identity(const MetricGraph& base) {
  Refinement r;
  r.graph = base;
  for (std::size_t v = 0; v < base.vertex_count(); ++v) r.vertex_place.push_back(GraphPlace::at_vertex(v));
  r.edge_pieces.resize(base.edge_count());
  for (std::size_t e = 0; e < base.edge_count(); ++e) {
    r.pieces.push_back({e, Rational(0), base.edge(e).length});
    r.edge_pieces[e].push_back(e);
  }
  return r;
}

GraphPlace Refinement::to_base(const GraphPlace& refined) const {
  if (refined.is_vertex()) return vertex_place.at(refined.vertex());
  const Piece& piece = pieces.at(refined.edge());
  return GraphPlace::interior(piece.base_edge, piece.from + refined.offset());
}

std::optional<std::size_t> Refinement::vertex_at(const GraphPlace& base) const {
  if (base.is_vertex()) return base.vertex();
  for (std::size_t re : edge_pieces.at(base.edge())) {
    if (pieces[re].from == base.offset()) return graph.edge(re).tail;
    if (pieces[re].to == base.offset()) return graph.edge(re).head;
  }
  return std::nullopt;
}

GraphPlace Refinement::to_refined(const GraphPlace& base) const {
  if (base.is_vertex()) return base;
  if (base.edge() >= edge_pieces.size()) fail(ErrorCode::PlaceOffGraph, "edge index out of range");
  for (std::size_t re : edge_pieces[base.edge()]) {
    const Piece& piece = pieces[re];
    if (base.offset() == piece.from) return GraphPlace::at_vertex(graph.edge(re).tail);
    if (base.offset() == piece.to) return GraphPlace::at_vertex(graph.edge(re).head);
    if (base.offset() > piece.from && base.offset() < piece.to) {
      return GraphPlace::interior(re, base.offset() - piece.from);
    }
  }
  fail(ErrorCode::PlaceOffGraph, "place is not on the refined edge");
}

Refinement refine(const MetricGraph& g, std::span<const GraphPlace> places) {
  std::vector<std::set<Rational>> cuts(g.edge_count());
  for (const auto& p : places) {
    p.check_on(g);
    if (!p.is_vertex()) cuts[p.edge()].insert(p.offset());
  }

  std::set<std::string> taken(g.vertex_ids().begin(), g.vertex_ids().end());
  for (const auto& e : g.edges()) taken.insert(e.id);
  auto fresh = [&](std::string id) {
    while (taken.count(id)) id += "'";
    taken.insert(id);
    return id;
  };

  Refinement r;
  std::vector<std::string> vertex_ids = g.vertex_ids();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) r.vertex_place.push_back(GraphPlace::at_vertex(v));
  std::vector<std::vector<std::string>> cut_vertex_ids(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    for (const auto& t : cuts[e]) {
      cut_vertex_ids[e].push_back(fresh(g.edge(e).id + "@" + format_rational(t)));
      vertex_ids.push_back(cut_vertex_ids[e].back());
      r.vertex_place.push_back(GraphPlace::interior(e, t));
    }
  }

  std::vector<EdgeSpec> specs;
  r.edge_pieces.resize(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    if (cuts[e].empty()) {
      specs.push_back({edge.id, g.vertex_id(edge.tail), g.vertex_id(edge.head), edge.length});
      r.edge_pieces[e].push_back(r.pieces.size());
      r.pieces.push_back({e, Rational(0), edge.length});
      continue;
    }
    std::vector<Rational> stops{Rational(0)};
    stops.insert(stops.end(), cuts[e].begin(), cuts[e].end());
    stops.push_back(edge.length);
    std::vector<std::string> ends{g.vertex_id(edge.tail)};
    ends.insert(ends.end(), cut_vertex_ids[e].begin(), cut_vertex_ids[e].end());
    ends.push_back(g.vertex_id(edge.head));
    for (std::size_t k = 0; k + 1 < stops.size(); ++k) {
      specs.push_back({fresh(edge.id + "." + std::to_string(k + 1)), ends[k], ends[k + 1], stops[k + 1] - stops[k]});
      r.edge_pieces[e].push_back(r.pieces.size());
      r.pieces.push_back({e, stops[k], stops[k + 1]});
    }
  }
  r.graph = MetricGraph::build(std::move(vertex_ids), specs);
  return r;
}

}  // namespace hybrid_jacobi
