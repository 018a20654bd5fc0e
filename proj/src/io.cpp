#include "hybrid_jacobi/io.hpp"

#include <fstream>
#include <sstream>

namespace hybrid_jacobi::io {

namespace {

const json& member(const json& obj, const char* key, const std::string& field) {
  if (!obj.is_object()) fail(ErrorCode::Parse, field + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCode::Parse, field + ": missing \"" + key + "\"");
  return *it;
}

std::string read_string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(ErrorCode::Parse, field + ": expected a string");
  return j.get<std::string>();
}

std::int64_t read_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(ErrorCode::Parse, field + ": expected an integer");
  return j.get<std::int64_t>();
}

const json& read_array(const json& j, const std::string& field) {
  if (!j.is_array()) fail(ErrorCode::Parse, field + ": expected an array");
  return j;
}

CVector read_cvector(const json& j, const ReadContext& ctx, const std::string& field) {
  CVector out;
  std::size_t k = 0;
  for (const auto& z : read_array(j, field)) {
    out.push_back(read_complex(z, ctx, field + "[" + std::to_string(k++) + "]"));
  }
  return out;
}

json write_cvector(const CVector& v, const NumericMode& mode) {
  json out = json::array();
  for (const auto& z : v) out.push_back(write_complex(z, mode));
  return out;
}

json write_vector(const VectorQ& v, const NumericMode& mode) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(write_rational(v(i), mode));
  return out;
}

void put_banner(json& doc, const NumericMode& mode) {
  if (!mode.is_exact()) doc["mode"] = "float";
}

// Divisor documents may be bare lists, which cannot carry a banner.
std::pair<const json*, ReadContext> divisor_terms(const json& doc, const NumericMode& mode) {
  if (doc.is_array()) return {&doc, ReadContext{mode, false}};
  const ReadContext ctx = context_for(doc, mode);
  return {&read_array(member(doc, "terms", "divisor"), "divisor.terms"), ctx};
}

std::size_t vertex_named(const MetricGraph& g, const json& j, const std::string& field) {
  const std::string id = read_string(j, field);
  const auto v = g.find_vertex(id);
  if (!v) fail(ErrorCode::UnknownId, field + ": unknown vertex \"" + id + "\"");
  return *v;
}

std::size_t edge_named(const MetricGraph& g, const json& j, const std::string& field) {
  const std::string id = read_string(j, field);
  const auto e = g.find_edge(id);
  if (!e) fail(ErrorCode::UnknownId, field + ": unknown edge \"" + id + "\"");
  return *e;
}

GraphPlace read_graph_place(const json& j, const MetricGraph& g, const ReadContext& ctx, const std::string& field) {
  if (j.is_object() && j.contains("vertex")) return GraphPlace::at_vertex(vertex_named(g, j["vertex"], field + ".vertex"));
  const std::size_t e = edge_named(g, member(j, "edge", field), field + ".edge");
  return GraphPlace::on_edge(g, e, read_rational(member(j, "offset", field), ctx, field + ".offset"));
}

json write_graph_place(const MetricGraph& g, const GraphPlace& p, const NumericMode& mode) {
  if (p.is_vertex()) return {{"vertex", g.vertex_id(p.vertex())}};
  return {{"edge", g.edge(p.edge()).id}, {"offset", write_rational(p.offset(), mode)}};
}

SurfacePointRef read_surface_point(const json& j, const MCRS& m, std::size_t v, const std::string& field) {
  if (j.contains("point")) {
    SurfacePointRef p = SurfacePointRef::named(read_string(j["point"], field + ".point"));
    if (!m.surface(v).has_point(p)) {
      fail(ErrorCode::UnknownPoint, field + ".point: no point \"" + p.name + "\" on \"" + m.graph.vertex_id(v) + "\"");
    }
    return p;
  }
  return SurfacePointRef::marked(parse_slot_key(m.graph, v, read_string(member(j, "marked", field), field + ".marked")));
}

json write_surface_point(const MCRS& m, const SurfacePointRef& p) {
  if (p.kind == SurfacePointRef::Kind::Named) return {{"point", p.name}};
  return {{"marked", slot_key(m.graph, p.slot)}};
}

HybridPlace read_hybrid_place(const json& j, const MCRS& m, const ReadContext& ctx, const std::string& field) {
  if (!j.is_object()) fail(ErrorCode::Parse, field + ": expected an object");
  if (j.contains("surface")) {
    const std::size_t v = vertex_named(m.graph, j["surface"], field + ".surface");
    const SurfacePointRef p = read_surface_point(j, m, v, field);
    const HybridPlace out = HybridPlace::surface_point(v, p);
    out.check_on(m);
    return out;
  }
  const std::size_t e = edge_named(m.graph, member(j, "edge", field), field + ".edge");
  const Rational offset = read_rational(member(j, "offset", field), ctx, field + ".offset");
  try {
    return HybridPlace::on_edge(m.graph, e, offset);
  } catch (const Error& err) {
    fail(err.code(), field + ": " + err.what());
  }
}

json write_hybrid_place(const MCRS& m, const HybridPlace& p, const NumericMode& mode) {
  if (!p.on_surface()) return {{"edge", m.graph.edge(p.edge()).id}, {"offset", write_rational(p.offset(), mode)}};
  json out = write_surface_point(m, p.point());
  out["surface"] = m.graph.vertex_id(p.vertex());
  return out;
}

}  // namespace

ReadContext context_for(const json& doc, const NumericMode& mode) {
  bool banner = false;
  if (doc.is_object() && doc.contains("mode")) {
    const std::string declared = read_string(doc["mode"], "mode");
    if (declared != "float" && declared != "exact") fail(ErrorCode::Parse, "mode: expected \"exact\" or \"float\"");
    banner = declared == "float";
    if (banner && mode.is_exact()) fail(ErrorCode::Parse, "mode: document is marked float but exact mode is active");
  }
  return {mode, banner && !mode.is_exact()};
}

Rational read_rational(const json& j, const ReadContext& ctx, const std::string& field) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      fail(ErrorCode::Parse, field + ": " + e.what());
    }
  }
  if (j.is_number()) {
    if (!ctx.numbers_allowed) {
      fail(ErrorCode::Parse, field + ": JSON numbers are only accepted in float mode under a \"mode\":\"float\" banner");
    }
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    return rational_from_double(j.get<double>());
  }
  fail(ErrorCode::Parse, field + ": expected a rational string \"p/q\"");
}

json write_rational(const Rational& value, const NumericMode& mode) {
  if (mode.is_exact()) return format_rational(value);
  return value.convert_to<double>();
}

Complex read_complex(const json& j, const ReadContext& ctx, const std::string& field) {
  if (!j.is_object()) fail(ErrorCode::Parse, field + ": expected {\"re\", \"im\"}");
  Complex z;
  z.re = read_rational(member(j, "re", field), ctx, field + ".re");
  if (j.contains("im")) z.im = read_rational(j["im"], ctx, field + ".im");
  return z;
}

json write_complex(const Complex& z, const NumericMode& mode) {
  return {{"re", write_rational(z.re, mode)}, {"im", write_rational(z.im, mode)}};
}

std::string slot_key(const MetricGraph& g, const EdgeSlot& slot) {
  const Edge& e = g.edge(slot.edge);
  if (!e.is_loop()) return e.id;
  return e.id + (slot.end == End::Tail ? ":tail" : ":head");
}

EdgeSlot parse_slot_key(const MetricGraph& g, std::size_t vertex, const std::string& key) {
  const std::string& vid = g.vertex_id(vertex);
  if (const auto e = g.find_edge(key)) {
    const Edge& edge = g.edge(*e);
    if (edge.is_loop()) fail(ErrorCode::MarkedSlotMismatch, "loop \"" + key + "\" needs \":tail\" or \":head\"");
    if (edge.tail == vertex) return {*e, End::Tail};
    if (edge.head == vertex) return {*e, End::Head};
    fail(ErrorCode::MarkedSlotMismatch, "edge \"" + key + "\" is not incident to \"" + vid + "\"");
  }
  const auto colon = key.rfind(':');
  if (colon != std::string::npos) {
    const std::string end = key.substr(colon + 1);
    const auto e = g.find_edge(key.substr(0, colon));
    if (e && (end == "tail" || end == "head")) {
      const EdgeSlot slot{*e, end == "tail" ? End::Tail : End::Head};
      if (g.slot_vertex(slot) != vertex) {
        fail(ErrorCode::MarkedSlotMismatch, "slot \"" + key + "\" is not at \"" + vid + "\"");
      }
      return slot;
    }
  }
  fail(ErrorCode::UnknownId, "unknown edge slot \"" + key + "\"");
}

MCRS parse_instance(const json& doc, const NumericMode& mode) {
  const ReadContext ctx = context_for(doc, mode);
  const json& graph = member(doc, "graph", "instance");
  std::vector<std::string> vertices;
  std::size_t k = 0;
  for (const auto& v : read_array(member(graph, "vertices", "graph"), "graph.vertices")) {
    vertices.push_back(read_string(v, "graph.vertices[" + std::to_string(k++) + "]"));
  }
  std::vector<EdgeSpec> edges;
  k = 0;
  for (const auto& e : read_array(member(graph, "edges", "graph"), "graph.edges")) {
    const std::string field = "graph.edges[" + std::to_string(k++) + "]";
    edges.push_back({read_string(member(e, "id", field), field + ".id"), read_string(member(e, "from", field), field + ".from"),
                     read_string(member(e, "to", field), field + ".to"),
                     read_rational(member(e, "length", field), ctx, field + ".length")});
  }
  MetricGraph g = MetricGraph::build(std::move(vertices), edges);

  std::map<std::string, VertexSurface> surfaces;
  const json& surf = member(doc, "surfaces", "instance");
  if (!surf.is_object()) fail(ErrorCode::Parse, "surfaces: expected an object keyed by vertex id");
  for (const auto& [vid, sj] : surf.items()) {
    const std::string field = "surfaces." + vid;
    const auto v = g.find_vertex(vid);
    if (!v) fail(ErrorCode::UnknownId, field + ": unknown vertex");
    VertexSurface s;
    const std::int64_t genus = read_integer(member(sj, "genus", field), field + ".genus");
    if (genus < 0) fail(ErrorCode::DimensionMismatch, field + ".genus: negative");
    s.genus = static_cast<int>(genus);
    if (sj.contains("lattice")) {
      std::size_t i = 0;
      for (const auto& lam : read_array(sj["lattice"], field + ".lattice")) {
        s.lattice.push_back(read_cvector(lam, ctx, field + ".lattice[" + std::to_string(i++) + "]"));
      }
    }
    if (sj.contains("marked")) {
      if (!sj["marked"].is_object()) fail(ErrorCode::Parse, field + ".marked: expected an object");
      for (const auto& [key, z] : sj["marked"].items()) {
        EdgeSlot slot;
        try {
          slot = parse_slot_key(g, *v, key);
        } catch (const Error& e) {
          fail(ErrorCode::SlotBijectionBroken, field + ".marked." + key + ": " + e.what());
        }
        if (!s.marked.emplace(slot, read_cvector(z, ctx, field + ".marked." + key)).second) {
          fail(ErrorCode::SlotBijectionBroken, field + ".marked." + key + ": slot given twice");
        }
      }
    }
    if (sj.contains("points")) {
      if (!sj["points"].is_object()) fail(ErrorCode::Parse, field + ".points: expected an object");
      for (const auto& [name, z] : sj["points"].items()) s.points[name] = read_cvector(z, ctx, field + ".points." + name);
    }
    try {
      validate_surface(s);
    } catch (const Error& e) {
      fail(e.code(), field + ": " + e.what());
    }
    surfaces.emplace(vid, std::move(s));
  }
  return build_mcrs(std::move(g), std::move(surfaces));
}

json instance_to_json(const MCRS& m, const NumericMode& mode) {
  json doc;
  json edges = json::array();
  for (const auto& e : m.graph.edges()) {
    edges.push_back({{"id", e.id},
                     {"from", m.graph.vertex_id(e.tail)},
                     {"to", m.graph.vertex_id(e.head)},
                     {"length", write_rational(e.length, mode)}});
  }
  doc["graph"] = {{"vertices", m.graph.vertex_ids()}, {"edges", edges}};
  json surfaces = json::object();
  for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
    const VertexSurface& s = m.surface(v);
    json lattice = json::array();
    for (const auto& lam : s.lattice) lattice.push_back(write_cvector(lam, mode));
    json marked = json::object();
    for (const auto& [slot, z] : s.marked) marked[slot_key(m.graph, slot)] = write_cvector(z, mode);
    json points = json::object();
    for (const auto& [name, z] : s.points) points[name] = write_cvector(z, mode);
    surfaces[m.graph.vertex_id(v)] = {{"genus", s.genus}, {"lattice", lattice}, {"marked", marked}, {"points", points}};
  }
  doc["surfaces"] = surfaces;
  put_banner(doc, mode);
  return doc;
}

std::string canonical_dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string canonicalize_instance(const std::string& text, const NumericMode& mode) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
  }
  return canonical_dump(instance_to_json(parse_instance(doc, mode), mode));
}

HybridDivisor parse_divisor(const json& doc, const MCRS& m, const NumericMode& mode) {
  const auto [terms, ctx] = divisor_terms(doc, mode);
  HybridDivisor d;
  std::size_t k = 0;
  for (const auto& t : *terms) {
    const std::string field = "divisor[" + std::to_string(k++) + "]";
    d.add(read_hybrid_place(member(t, "place", field), m, ctx, field + ".place"),
          read_integer(member(t, "coeff", field), field + ".coeff"));
  }
  return d;
}

json divisor_to_json(const MCRS& m, const HybridDivisor& d, const NumericMode& mode) {
  json terms = json::array();
  for (const auto& [p, c] : d.terms()) terms.push_back({{"place", write_hybrid_place(m, p, mode)}, {"coeff", c}});
  if (mode.is_exact()) return terms;
  return {{"mode", "float"}, {"terms", terms}};
}

TropicalDivisor parse_tropical_divisor(const json& doc, const MetricGraph& g, const NumericMode& mode) {
  const auto [terms, ctx] = divisor_terms(doc, mode);
  TropicalDivisor d;
  std::size_t k = 0;
  for (const auto& t : *terms) {
    const std::string field = "divisor[" + std::to_string(k++) + "]";
    d.add(read_graph_place(member(t, "place", field), g, ctx, field + ".place"),
          read_integer(member(t, "coeff", field), field + ".coeff"));
  }
  return d;
}

json tropical_divisor_to_json(const MetricGraph& g, const TropicalDivisor& d, const NumericMode& mode) {
  json terms = json::array();
  for (const auto& [p, c] : d.terms()) terms.push_back({{"place", write_graph_place(g, p, mode)}, {"coeff", c}});
  if (mode.is_exact()) return terms;
  return {{"mode", "float"}, {"terms", terms}};
}

PLFunction parse_pl_function(const json& doc, const MetricGraph& g, const ReadContext& ctx) {
  std::map<GraphPlace, Rational> values;
  std::size_t k = 0;
  for (const auto& t : read_array(doc, "graph_part")) {
    const std::string field = "graph_part[" + std::to_string(k++) + "]";
    const GraphPlace p = read_graph_place(member(t, "place", field), g, ctx, field + ".place");
    if (!values.emplace(p, read_rational(member(t, "value", field), ctx, field + ".value")).second) {
      fail(ErrorCode::Parse, field + ": place given twice");
    }
  }
  return PLFunction::from_breakpoints(g, values);
}

json pl_function_to_json(const MetricGraph& g, const PLFunction& f, const NumericMode& mode) {
  json out = json::array();
  for (std::size_t v = 0; v < f.values().size(); ++v) {
    out.push_back({{"place", write_graph_place(g, f.breakpoints()[v], mode)}, {"value", write_rational(f.value(v), mode)}});
  }
  return out;
}

HybridFunction parse_function(const json& doc, const MCRS& m, const NumericMode& mode) {
  const ReadContext ctx = context_for(doc, mode);
  HybridFunction f;
  f.graph_part = parse_pl_function(member(doc, "graph_part", "function"), m.graph, ctx);
  f.vertex_classes.assign(m.graph.vertex_count(), SurfaceDivisor{});
  if (doc.contains("vertex_classes")) {
    const json& classes = doc["vertex_classes"];
    if (!classes.is_object()) fail(ErrorCode::Parse, "vertex_classes: expected an object keyed by vertex id");
    for (const auto& [vid, terms] : classes.items()) {
      const std::string field = "vertex_classes." + vid;
      const auto v = m.graph.find_vertex(vid);
      if (!v) fail(ErrorCode::UnknownId, field + ": unknown vertex");
      std::size_t k = 0;
      for (const auto& t : read_array(terms, field)) {
        const std::string tf = field + "[" + std::to_string(k++) + "]";
        f.vertex_classes[*v].add(read_surface_point(member(t, "place", tf), m, *v, tf + ".place"),
                                 read_integer(member(t, "coeff", tf), tf + ".coeff"));
      }
    }
  }
  validate_function(m, f, mode);
  return f;
}

json function_to_json(const MCRS& m, const HybridFunction& f, const NumericMode& mode) {
  json classes = json::object();
  for (std::size_t v = 0; v < f.vertex_classes.size(); ++v) {
    if (f.vertex_classes[v].empty()) continue;
    json terms = json::array();
    for (const auto& [p, c] : f.vertex_classes[v].terms()) terms.push_back({{"place", write_surface_point(m, p)}, {"coeff", c}});
    classes[m.graph.vertex_id(v)] = terms;
  }
  json doc = {{"graph_part", pl_function_to_json(m.graph, f.graph_part, mode)}, {"vertex_classes", classes}};
  put_banner(doc, mode);
  return doc;
}

json frame_to_json(const MCRS& m, const Frame& frame) {
  json tree = json::array();
  for (std::size_t e = 0; e < m.graph.edge_count(); ++e) {
    if (frame.basis.tree.in_tree[e]) tree.push_back(m.graph.edge(e).id);
  }
  json basepoints = json::object();
  for (std::size_t v = 0; v < m.graph.vertex_count(); ++v) {
    const auto name = m.surface(v).basepoint_name();
    basepoints[m.graph.vertex_id(v)] = name ? json(*name) : json(nullptr);
  }
  return {{"base_vertex", m.graph.vertex_id(frame.base_vertex)}, {"tree_edges", tree}, {"basepoints", basepoints}};
}

Frame parse_frame(const json& doc, const MCRS& m) {
  const std::size_t base = vertex_named(m.graph, member(doc, "base_vertex", "frame"), "frame.base_vertex");
  if (!doc.contains("tree_edges")) {
    Frame f = default_frame(m);
    f.base_vertex = base;
    return f;
  }
  std::vector<std::size_t> edges;
  std::size_t k = 0;
  for (const auto& e : read_array(doc["tree_edges"], "frame.tree_edges")) {
    edges.push_back(edge_named(m.graph, e, "frame.tree_edges[" + std::to_string(k++) + "]"));
  }
  return make_frame(m, base, edges);
}

HybridCoordinates parse_coordinates(const json& doc, const MCRS& m, const NumericMode& mode, Frame* frame) {
  const ReadContext ctx = context_for(doc, mode);
  HybridCoordinates c = HybridCoordinates::zero(m);
  if (doc.contains("blocks")) {
    const json& blocks = doc["blocks"];
    if (!blocks.is_object()) fail(ErrorCode::Parse, "blocks: expected an object keyed by vertex id");
    for (const auto& [vid, z] : blocks.items()) {
      const auto v = m.graph.find_vertex(vid);
      if (!v) fail(ErrorCode::UnknownId, "blocks." + vid + ": unknown vertex");
      CVector block = read_cvector(z, ctx, "blocks." + vid);
      if (block.size() != c.blocks[*v].size()) {
        fail(ErrorCode::DimensionMismatch, "blocks." + vid + ": expected " + std::to_string(c.blocks[*v].size()) + " entries");
      }
      c.blocks[*v] = std::move(block);
    }
  }
  if (doc.contains("gamma")) {
    const json& gamma = read_array(doc["gamma"], "gamma");
    if (static_cast<Eigen::Index>(gamma.size()) != c.gamma.size()) {
      fail(ErrorCode::DimensionMismatch, "gamma: expected " + std::to_string(c.gamma.size()) + " entries");
    }
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      c.gamma(static_cast<Eigen::Index>(i)) = read_rational(gamma[i], ctx, "gamma[" + std::to_string(i) + "]");
    }
  }
  if (frame) *frame = doc.contains("frame") ? parse_frame(doc["frame"], m) : default_frame(m);
  return c;
}

json coordinates_to_json(const MCRS& m, const Frame& frame, const HybridCoordinates& c, const NumericMode& mode) {
  json blocks = json::object();
  for (std::size_t v = 0; v < c.blocks.size(); ++v) {
    if (!c.blocks[v].empty()) blocks[m.graph.vertex_id(v)] = write_cvector(c.blocks[v], mode);
  }
  json doc = {{"blocks", blocks}, {"gamma", write_vector(c.gamma, mode)}, {"frame", frame_to_json(m, frame)}};
  put_banner(doc, mode);
  return doc;
}

json verdict_to_json(const MCRS& m, const HybridVerdict& v, const NumericMode& mode) {
  static const char* const names[] = {"lattice", "proof", "both"};
  json doc = {{"principal", v.principal}, {"algorithm", names[static_cast<int>(v.algorithm)]}};
  if (!v.principal) {
    doc["reason"] = v.reason;
  } else {
    json cert = json::object();
    if (v.witness) cert["witness"] = pl_function_to_json(m.graph, *v.witness, mode);
    if (v.algorithm != Algorithm::Proof) cert["cycle_coordinates"] = write_vector(v.cycle_coordinates, mode);
    json vertex = json::object();
    for (std::size_t k = 0; k < v.vertex_coordinates.size(); ++k) {
      if (v.vertex_coordinates[k].size() > 0) vertex[m.graph.vertex_id(k)] = write_vector(v.vertex_coordinates[k], mode);
    }
    cert["vertex_coordinates"] = vertex;
    cert["frame"] = frame_to_json(m, default_frame(m));
    doc["certificate"] = cert;
  }
  put_banner(doc, mode);
  return doc;
}

json move_to_json(const MetricGraph& g, const ChipFiringMove& move, const NumericMode& mode) {
  return {{"low", write_rational(move.low, mode)},
          {"high", write_rational(move.high, mode)},
          {"function", pl_function_to_json(g, move.as_function(), mode)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Parse, path + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, path + ": invalid JSON: " + e.what());
  }
}

}  // namespace hybrid_jacobi::io
