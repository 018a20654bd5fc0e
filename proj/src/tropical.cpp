#include "hybrid_jacobi/tropical.hpp"

#include <set>
#include <sstream>

#include "hybrid_jacobi/linalg.hpp"

namespace hybrid_jacobi {

std::string describe(const MetricGraph& g, const TropicalDivisor& d) {
  if (d.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : d.terms()) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const auto magnitude = c < 0 ? -c : c;
    if (magnitude != 1) os << magnitude << "*";
    os << "(" << describe(g, p) << ")";
  }
  return os.str();
}

PLFunction::PLFunction(Refinement model, std::vector<Rational> values)
    : model_(std::move(model)), values_(std::move(values)) {
  if (values_.size() != model_.graph.vertex_count()) {
    fail(ErrorCode::DimensionMismatch, "one value per model vertex expected");
  }
}

PLFunction PLFunction::constant(const MetricGraph& base, const Rational& value) {
  return PLFunction(Refinement::identity(base), std::vector<Rational>(base.vertex_count(), value));
}

PLFunction PLFunction::from_breakpoints(const MetricGraph& base, const std::map<GraphPlace, Rational>& values) {
  std::vector<GraphPlace> places;
  for (const auto& [p, v] : values) places.push_back(p);
  Refinement model = refine(base, places);
  std::vector<Rational> vals;
  for (const auto& p : model.vertex_place) {
    const auto it = values.find(p);
    if (it == values.end()) fail(ErrorCode::DimensionMismatch, "no value given at vertex \"" + describe(base, p) + "\"");
    vals.push_back(it->second);
  }
  return PLFunction(std::move(model), std::move(vals));
}

Rational PLFunction::slope(std::size_t refined_edge) const {
  const Edge& e = model_.graph.edge(refined_edge);
  return (values_[e.head] - values_[e.tail]) / e.length;
}

bool PLFunction::has_integer_slopes() const {
  for (std::size_t e = 0; e < model_.graph.edge_count(); ++e) {
    if (!is_integer(slope(e))) return false;
  }
  return true;
}

Rational PLFunction::value_at(const GraphPlace& base_place) const {
  const GraphPlace p = model_.to_refined(base_place);
  if (p.is_vertex()) return values_.at(p.vertex());
  return values_[model_.graph.edge(p.edge()).tail] + p.offset() * slope(p.edge());
}

Rational PLFunction::outgoing_slope(const EdgeSlot& base_slot) const {
  const auto& pieces = model_.edge_pieces.at(base_slot.edge);
  if (base_slot.end == End::Tail) return slope(pieces.front());
  return -slope(pieces.back());
}

PLFunction resample(const MetricGraph& base, const PLFunction& f, std::span<const GraphPlace> places) {
  std::vector<GraphPlace> all(places.begin(), places.end());
  all.insert(all.end(), f.breakpoints().begin(), f.breakpoints().end());
  Refinement model = refine(base, all);
  std::vector<Rational> vals;
  vals.reserve(model.vertex_place.size());
  for (const auto& p : model.vertex_place) vals.push_back(f.value_at(p));
  return PLFunction(std::move(model), std::move(vals));
}

PLFunction add(const MetricGraph& base, const PLFunction& a, const PLFunction& b) {
  PLFunction common = resample(base, a, b.breakpoints());
  std::vector<Rational> vals = common.values();
  for (std::size_t v = 0; v < vals.size(); ++v) vals[v] += b.value_at(common.model().vertex_place[v]);
  return PLFunction(common.model(), std::move(vals));
}

PLFunction scale(const PLFunction& f, const Rational& k) {
  std::vector<Rational> vals = f.values();
  for (auto& v : vals) v *= k;
  return PLFunction(f.model(), std::move(vals));
}

PLFunction shift(const PLFunction& f, const Rational& c) {
  std::vector<Rational> vals = f.values();
  for (auto& v : vals) v += c;
  return PLFunction(f.model(), std::move(vals));
}

bool same_function(const MetricGraph& base, const PLFunction& a, const PLFunction& b) {
  const PLFunction common = resample(base, a, b.breakpoints());
  for (std::size_t v = 0; v < common.values().size(); ++v) {
    if (common.values()[v] != b.value_at(common.model().vertex_place[v])) return false;
  }
  return true;
}

TropicalDivisor divisor_of_pl(const PLFunction& f) {
  const MetricGraph& model = f.model().graph;
  std::vector<Rational> order(model.vertex_count(), Rational(0));
  for (std::size_t e = 0; e < model.edge_count(); ++e) {
    const Rational s = f.slope(e);
    if (!is_integer(s)) {
      fail(ErrorCode::NonIntegerSlope, "slope " + format_rational(s) + " on model edge \"" + model.edge(e).id + "\"");
    }
    order[model.edge(e).tail] += s;
    order[model.edge(e).head] -= s;
  }
  TropicalDivisor d;
  for (std::size_t v = 0; v < order.size(); ++v) d.add(f.model().vertex_place[v], to_int64(order[v]));
  if (d.degree() != 0) fail(ErrorCode::InternalDisagreement, "divisor of a PL function has nonzero degree");
  return d;
}

PeriodData period_matrix(const MetricGraph& g) { return period_matrix(g, cycle_basis(g)); }

PeriodData period_matrix(const MetricGraph& g, CycleBasis basis) {
  PeriodData pd;
  const int n = basis.size();
  pd.gram = MatrixQ::Constant(n, n, Rational(0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Rational sum(0);
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const auto ei = static_cast<Eigen::Index>(e);
        const int product = basis.cycles(i, ei) * basis.cycles(j, ei);
        if (product != 0) sum += product * g.edge(e).length;
      }
      pd.gram(i, j) = sum;
    }
  }
  pd.basis = std::move(basis);
  return pd;
}

VectorQ chain_integral(const MetricGraph& g, const CycleBasis& basis, const SignedEdgeChain& chain) {
  const VectorQ lengths = chain.edge_lengths(g);
  VectorQ out = zero_vector(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    for (Eigen::Index e = 0; e < lengths.size(); ++e) {
      if (basis.cycles(i, e) != 0) out(i) += basis.cycles(i, e) * lengths(e);
    }
  }
  return out;
}

VectorQ root_integral(const MetricGraph& g, const CycleBasis& basis, const GraphPlace& p) {
  return chain_integral(g, basis, tree_path(g, basis, GraphPlace::at_vertex(basis.tree.root), p));
}

VectorQ aj_tropical(const MetricGraph& g, const PeriodData& pd, const TropicalDivisor& d,
                    const GraphPlace& basepoint) {
  basepoint.check_on(g);
  VectorQ out = zero_vector(pd.basis.size());
  for (const auto& [p, c] : d.terms()) {
    out += Rational(c) * chain_integral(g, pd.basis, tree_path(g, pd.basis, basepoint, p));
  }
  return out;
}

bool principal_by_lattice(const MetricGraph& g, const PeriodData& pd, const TropicalDivisor& d,
                          const NumericMode& mode, VectorQ* coordinates) {
  if (d.degree() != 0) fail(ErrorCode::NonzeroDegree, "degree " + std::to_string(d.degree()));
  const VectorQ b = aj_tropical(g, pd, d, GraphPlace::at_vertex(0));
  VectorQ x = b.size() == 0 ? VectorQ(0) : linalg::solve_unique<Rational>(pd.gram, b);
  const bool integral = all_integral(x, mode);
  if (coordinates) *coordinates = std::move(x);
  return integral;
}

bool principal_by_laplacian(const MetricGraph& g, const TropicalDivisor& d, const NumericMode& mode,
                            PLFunction* potentials) {
  if (d.degree() != 0) fail(ErrorCode::NonzeroDegree, "degree " + std::to_string(d.degree()));
  const std::vector<GraphPlace> support = d.support();
  Refinement model = refine(g, support);
  const MetricGraph& m = model.graph;
  const auto n = static_cast<Eigen::Index>(m.vertex_count());

  MatrixQ laplacian = MatrixQ::Constant(n, n, Rational(0));
  for (const auto& e : m.edges()) {
    if (e.is_loop()) continue;
    const Rational conductance = 1 / e.length;
    const auto a = static_cast<Eigen::Index>(e.tail);
    const auto b = static_cast<Eigen::Index>(e.head);
    laplacian(a, a) += conductance;
    laplacian(b, b) += conductance;
    laplacian(a, b) -= conductance;
    laplacian(b, a) -= conductance;
  }
  // Sum of outgoing slopes at x is -(L phi)(x); prescribe it to be D(x).
  VectorQ rhs = zero_vector(n);
  for (const auto& [p, c] : d.terms()) {
    rhs(static_cast<Eigen::Index>(*model.vertex_at(p))) = Rational(-c);
  }
  std::vector<Rational> phi(static_cast<std::size_t>(n), Rational(0));
  if (n > 1) {
    const VectorQ reduced = linalg::solve_unique<Rational>(laplacian.bottomRightCorner(n - 1, n - 1),
                                                           rhs.tail(n - 1));
    for (Eigen::Index i = 1; i < n; ++i) phi[static_cast<std::size_t>(i)] = reduced(i - 1);
  }
  PLFunction f(std::move(model), std::move(phi));
  bool integral = true;
  for (std::size_t e = 0; e < f.model().graph.edge_count(); ++e) integral = is_integral(f.slope(e), mode) && integral;
  if (potentials) *potentials = std::move(f);
  return integral;
}

TropicalVerdict is_principal_tropical(const MetricGraph& g, const PeriodData& pd, const TropicalDivisor& d,
                                      const NumericMode& mode) {
  TropicalVerdict verdict;
  const bool by_lattice = principal_by_lattice(g, pd, d, mode, &verdict.lattice_coordinates);
  const bool by_laplacian = principal_by_laplacian(g, d, mode, &verdict.witness);
  if (by_lattice != by_laplacian) {
    fail(ErrorCode::InternalDisagreement, "tropical routes disagree on " + describe(g, d));
  }
  verdict.principal = by_lattice;
  if (!verdict.principal) verdict.reason = "graph part not principal: Abel-Jacobi coordinates not in the period lattice";
  return verdict;
}

}  // namespace hybrid_jacobi
