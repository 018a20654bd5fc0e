#include <algorithm>
#include <numeric>
#include <set>

#include "hybrid_jacobi/tropical.hpp"

namespace hybrid_jacobi {

namespace {

std::vector<Rational> vertex_orders(const PLFunction& f) {
  const MetricGraph& m = f.model().graph;
  std::vector<Rational> order(m.vertex_count(), Rational(0));
  for (std::size_t e = 0; e < m.edge_count(); ++e) {
    const Rational s = f.slope(e);
    order[m.edge(e).tail] += s;
    order[m.edge(e).head] -= s;
  }
  return order;
}

Rational clamp(const Rational& x, const Rational& lo, const Rational& hi) {
  if (x < lo) return lo;
  if (x > hi) return hi;
  return x;
}

}  // namespace

bool ChipFiringMove::satisfies_invariants(std::string* why) const {
  auto reject = [&](const std::string& message) {
    if (why) *why = message;
    return false;
  };
  const MetricGraph& m = model.graph;
  if (values.size() != m.vertex_count() || sides.size() != m.vertex_count()) {
    return reject("per-vertex data does not match the model");
  }
  if (!(low < high)) return reject("plateau values must satisfy low < high");

  const PLFunction f = as_function();
  const std::vector<Rational> order = vertex_orders(f);
  bool has_low = false;
  bool has_high = false;
  for (std::size_t v = 0; v < m.vertex_count(); ++v) {
    switch (sides[v]) {
      case Side::Low:
        has_low = true;
        if (values[v] != low) return reject("vertex \"" + m.vertex_id(v) + "\" is on the low plateau but not at its value");
        break;
      case Side::High:
        has_high = true;
        if (values[v] != high) return reject("vertex \"" + m.vertex_id(v) + "\" is on the high plateau but not at its value");
        break;
      case Side::Between:
        if (!(low < values[v] && values[v] < high)) return reject("vertex \"" + m.vertex_id(v) + "\" is off the plateaus but not between them");
        if (m.valency(v) != 2) return reject("connecting segment passes through vertex \"" + m.vertex_id(v) + "\" of valency != 2");
        if (order[v] != 0) return reject("connecting segment bends at vertex \"" + m.vertex_id(v) + "\"");
        break;
    }
  }
  if (!has_low || !has_high) return reject("both plateaus must be nonempty");
  for (std::size_t e = 0; e < m.edge_count(); ++e) {
    if (!is_integer(f.slope(e))) return reject("non-integer slope on model edge \"" + m.edge(e).id + "\"");
  }
  return true;
}

std::vector<ChipFiringMove> decompose_chip_firing(const MetricGraph& base, const PLFunction& f) {
  const MetricGraph& fm = f.model().graph;
  for (std::size_t e = 0; e < fm.edge_count(); ++e) {
    if (!is_integer(f.slope(e))) {
      fail(ErrorCode::NonIntegerSlope, "slope " + format_rational(f.slope(e)) + " on model edge \"" + fm.edge(e).id + "\"");
    }
  }

  // Corners: wherever the function is not locally a straight segment.
  const std::vector<Rational> order = vertex_orders(f);
  std::set<Rational> levels;
  for (std::size_t v = 0; v < fm.vertex_count(); ++v) {
    if (fm.valency(v) != 2 || order[v] != 0) levels.insert(f.value(v));
  }
  if (levels.size() < 2) return {};

  // Common model: breakpoints of f plus every crossing of a corner level.
  std::vector<GraphPlace> cuts = f.breakpoints();
  for (std::size_t e = 0; e < fm.edge_count(); ++e) {
    const Edge& edge = fm.edge(e);
    const Rational a = f.value(edge.tail);
    const Rational b = f.value(edge.head);
    if (a == b) continue;
    const Rational s = f.slope(e);
    for (const auto& level : levels) {
      if ((level - a) * (level - b) < 0) {
        cuts.push_back(f.model().to_base(GraphPlace::interior(e, (level - a) / s)));
      }
    }
  }
  const PLFunction sampled = resample(base, f, cuts);
  const Refinement& model = sampled.model();
  const MetricGraph& m = model.graph;
  const std::size_t n = m.vertex_count();

  std::vector<ChipFiringMove> moves;
  const std::vector<Rational> corner(levels.begin(), levels.end());
  for (std::size_t i = 0; i + 1 < corner.size(); ++i) {
    const Rational& lo = corner[i];
    const Rational& hi = corner[i + 1];
    std::vector<ChipFiringMove::Side> side(n);
    for (std::size_t v = 0; v < n; ++v) {
      const Rational& x = sampled.value(v);
      side[v] = x <= lo ? ChipFiringMove::Side::Low
                        : (x >= hi ? ChipFiringMove::Side::High : ChipFiringMove::Side::Between);
    }

    // Components of the high plateau, joined through high-high edges.
    std::vector<std::size_t> component(n);
    std::iota(component.begin(), component.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
      while (component[v] != v) v = component[v] = component[component[v]];
      return v;
    };
    for (const auto& e : m.edges()) {
      if (side[e.tail] == ChipFiringMove::Side::High && side[e.head] == ChipFiringMove::Side::High) {
        component[find(e.tail)] = find(e.head);
      }
    }

    // Ordered by the lowest vertex index in each component.
    std::vector<std::size_t> roots;
    for (std::size_t v = 0; v < n; ++v) {
      if (side[v] != ChipFiringMove::Side::High) continue;
      const std::size_t r = find(v);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }

    for (std::size_t root : roots) {
      ChipFiringMove move;
      move.model = model;
      move.low = Rational(0);
      move.high = hi - lo;
      move.values.assign(n, Rational(0));
      move.sides.assign(n, ChipFiringMove::Side::Low);
      std::vector<std::size_t> frontier;
      for (std::size_t v = 0; v < n; ++v) {
        if (side[v] == ChipFiringMove::Side::High && find(v) == root) {
          move.sides[v] = ChipFiringMove::Side::High;
          move.values[v] = move.high;
          frontier.push_back(v);
        }
      }
      // Segments hanging off this component descend through valency-2
      // vertices strictly between the levels.
      while (!frontier.empty()) {
        const std::size_t v = frontier.back();
        frontier.pop_back();
        for (const auto& slot : m.slots(v)) {
          const Edge& e = m.edge(slot.edge);
          const std::size_t w = slot.end == End::Tail ? e.head : e.tail;
          if (side[w] != ChipFiringMove::Side::Between || move.sides[w] == ChipFiringMove::Side::Between) continue;
          move.sides[w] = ChipFiringMove::Side::Between;
          move.values[w] = clamp(sampled.value(w), lo, hi) - lo;
          frontier.push_back(w);
        }
      }
      moves.push_back(std::move(move));
    }
  }
  return moves;
}

}  // namespace hybrid_jacobi
