#include "hybrid_jacobi/cli.hpp"

#include <algorithm>
#include <cstdlib>

#include <CLI11.hpp>

#include "hybrid_jacobi/io.hpp"
#include "hybrid_jacobi/verify.hpp"

namespace hybrid_jacobi {

namespace {

using io::json;

struct Options {
  std::string instance;
  std::string divisor;
  std::string function;
  std::string target;
  std::string mode;
  std::string epsilon;
  std::string algorithm = "both";
  std::string suite = "all";
  std::string base;
  std::uint64_t seed = 0;
  int cases = 20;
  bool as_json = false;
};

NumericMode resolve_mode(const Options& o) {
  std::string name = o.mode;
  if (name.empty()) {
    const char* env = std::getenv("HYBRID_JACOBI_MODE");
    name = env ? env : "exact";
  }
  if (name != "exact" && name != "float") fail(ErrorCode::Parse, "mode: expected \"exact\" or \"float\", got \"" + name + "\"");
  if (name == "exact") {
    if (!o.epsilon.empty()) fail(ErrorCode::Parse, "--epsilon only applies in float mode");
    return NumericMode::exact();
  }
  if (o.epsilon.empty()) return NumericMode::floating();
  const Rational eps = parse_rational(o.epsilon);
  if (eps <= 0) fail(ErrorCode::Parse, "--epsilon must be positive");
  return NumericMode::floating(eps);
}

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) fail(ErrorCode::Parse, std::string("missing ") + flag);
  return value;
}

void has_float_numbers(const json& j, bool& found) {
  if (j.is_number_float()) found = true;
  if (j.is_structured()) {
    for (const auto& child : j) has_float_numbers(child, found);
  }
}

void emit(std::ostream& out, const json& doc) { out << io::canonical_dump(doc); }

Algorithm parse_algorithm(const std::string& name) {
  if (name == "lattice") return Algorithm::Lattice;
  if (name == "proof") return Algorithm::Proof;
  if (name == "both") return Algorithm::Both;
  fail(ErrorCode::Parse, "--algorithm: expected lattice, proof or both");
}

int run_command(const std::string& command, const Options& o, std::ostream& out) {
  const NumericMode mode = resolve_mode(o);

  if (command == "check") {
    std::vector<std::string> names = o.suite == "all" ? verify::suite_names() : std::vector<std::string>{o.suite};
    verify::InstanceSeed seed;
    seed.seed = o.seed;
    json reports = json::array();
    bool passed = true;
    for (const auto& name : names) {
      const verify::SuiteResult r = verify::run_property_suite(name, seed, o.cases);
      passed = passed && r.passed();
      if (o.as_json) reports.push_back(r.to_json());
      else out << (r.passed() ? "PASS " : "FAIL ") << r.summary() << "\n";
    }
    if (o.as_json) emit(out, {{"suites", reports}, {"passed", passed}, {"seed", o.seed}});
    return passed ? kExitOk : kExitInternal;
  }

  const MCRS m = io::parse_instance(io::read_json_file(require(o.instance, "--instance")), mode);

  if (command == "validate") {
    if (o.as_json) emit(out, {{"valid", true}, {"genus", m.genus}});
    else out << "valid\n";
    return kExitOk;
  }
  if (command == "genus") {
    if (o.as_json) emit(out, {{"genus", m.genus}, {"surface_genus", m.surface_genus_total()}, {"graph_genus", m.graph.genus()}});
    else out << m.genus << "\n";
    return kExitOk;
  }
  if (command == "rank") {
    const int rank = homology_rank(m);
    if (o.as_json) emit(out, {{"rank", rank}});
    else out << rank << "\n";
    return kExitOk;
  }
  if (command == "periods") {
    const PeriodData pd = period_matrix(m.graph);
    json cycles = json::array();
    for (int i = 0; i < pd.basis.size(); ++i) {
      json coeffs = json::object();
      for (std::size_t e = 0; e < m.graph.edge_count(); ++e) {
        const int c = pd.basis.cycles(i, static_cast<Eigen::Index>(e));
        if (c != 0) coeffs[m.graph.edge(e).id] = c;
      }
      cycles.push_back({{"edge", m.graph.edge(pd.basis.non_tree_edges[static_cast<std::size_t>(i)]).id}, {"coefficients", coeffs}});
    }
    json gram = json::array();
    for (Eigen::Index i = 0; i < pd.gram.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < pd.gram.cols(); ++j) row.push_back(io::write_rational(pd.gram(i, j), mode));
      gram.push_back(row);
    }
    const Rational det = pd.gram.size() == 0 ? Rational(1) : linalg::determinant<Rational>(pd.gram);
    json doc = {{"cycles", cycles}, {"gram", gram}, {"determinant", io::write_rational(det, mode)},
                {"frame", io::frame_to_json(m, default_frame(m))}};
    if (!mode.is_exact()) doc["mode"] = "float";
    emit(out, doc);
    return kExitOk;
  }
  if (command == "aj") {
    const HybridDivisor d = io::parse_divisor(io::read_json_file(require(o.divisor, "--divisor")), m, mode);
    Frame frame = default_frame(m);
    if (!o.base.empty()) frame.base_vertex = m.graph.vertex_index(o.base);
    json doc = io::coordinates_to_json(m, frame, aj_hybrid(m, frame, d), mode);
    if (d.degree() != 0) doc["basepoint_dependent"] = true;
    emit(out, doc);
    return kExitOk;
  }
  if (command == "principal") {
    const HybridDivisor d = io::parse_divisor(io::read_json_file(require(o.divisor, "--divisor")), m, mode);
    const HybridVerdict v = is_principal_hybrid(m, d, parse_algorithm(o.algorithm), mode);
    if (o.as_json) emit(out, io::verdict_to_json(m, v, mode));
    else if (v.principal) out << "YES\n";
    else out << "NO: " << v.reason << "\n";
    return v.principal ? kExitOk : kExitNotPrincipal;
  }
  if (command == "lift") {
    const TropicalDivisor d = io::parse_tropical_divisor(io::read_json_file(require(o.divisor, "--divisor")), m.graph, mode);
    emit(out, io::divisor_to_json(m, lift_divisor(m, d), mode));
    return kExitOk;
  }
  if (command == "gamma-part") {
    const HybridDivisor d = io::parse_divisor(io::read_json_file(require(o.divisor, "--divisor")), m, mode);
    emit(out, io::tropical_divisor_to_json(m.graph, gamma_part(m, d), mode));
    return kExitOk;
  }
  if (command == "decompose") {
    const json doc = io::read_json_file(require(o.function, "--function"));
    const PLFunction f = doc.is_array() ? io::parse_pl_function(doc, m.graph, io::context_for(doc, mode))
                                        : io::parse_function(doc, m, mode).graph_part;
    const auto moves = decompose_chip_firing(m.graph, f);
    json list = json::array();
    for (const auto& move : moves) list.push_back(io::move_to_json(m.graph, move, mode));
    const Rational lowest = *std::min_element(f.values().begin(), f.values().end());
    json result = {{"minimum", io::write_rational(lowest, mode)}, {"moves", list}};
    if (!mode.is_exact()) result["mode"] = "float";
    emit(out, result);
    return kExitOk;
  }
  if (command == "preimage") {
    const json doc = io::read_json_file(require(o.target, "--target"));
    bool floats = false;
    has_float_numbers(doc, floats);
    if (floats && mode.is_exact()) {
      fail(ErrorCode::IrrationalTargetInExactMode, "target has floating-point entries; use rational strings or float mode");
    }
    Frame frame;
    const HybridCoordinates target = io::parse_coordinates(doc, m, mode, &frame);
    const Preimage pre = aj_preimage(m, frame, target);
    json result = {{"instance", io::instance_to_json(pre.complex, mode)}, {"divisor", io::divisor_to_json(pre.complex, pre.divisor, mode)}};
    if (!mode.is_exact()) result["mode"] = "float";
    emit(out, result);
    return kExitOk;
  }
  fail(ErrorCode::Parse, "unknown command \"" + command + "\"");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Divisors, Jacobians and principality on metrized complexes of Riemann surfaces", "hjac"};
  app.require_subcommand(1);
  Options o;

  struct Spec {
    const char* name;
    const char* help;
    bool divisor, function, target, algorithm, base, check;
  };
  const Spec specs[] = {
      {"validate", "parse and validate an instance", false, false, false, false, false, false},
      {"genus", "total genus of the complex", false, false, false, false, false, false},
      {"periods", "cycle basis and period matrix of the graph", false, false, false, false, false, false},
      {"aj", "Abel-Jacobi image of a divisor", true, false, false, false, true, false},
      {"principal", "decide whether a degree-0 divisor is principal", true, false, false, true, false, false},
      {"lift", "lift a graph divisor to the complex through the basepoints", true, false, false, false, false, false},
      {"gamma-part", "graph part of a divisor", true, false, false, false, false, false},
      {"decompose", "split a graph function into weighted chip-firing moves", false, true, false, false, false, false},
      {"rank", "rank of the homology lattice", false, false, false, false, false, false},
      {"preimage", "divisor with a prescribed Abel-Jacobi image", false, false, true, false, false, false},
      {"check", "run randomized property suites", false, false, false, false, false, true},
  };
  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    if (!s.check) sub->add_option("--instance", o.instance, "instance document")->required();
    if (s.divisor) sub->add_option("--divisor", o.divisor, "divisor document")->required();
    if (s.function) sub->add_option("--function", o.function, "function document")->required();
    if (s.target) sub->add_option("--target", o.target, "coordinate document")->required();
    if (s.algorithm) sub->add_option("--algorithm", o.algorithm, "lattice, proof or both")->check(CLI::IsMember({"lattice", "proof", "both"}));
    if (s.base) sub->add_option("--base", o.base, "base vertex id");
    if (s.check) {
      sub->add_option("--suite", o.suite, "suite name or \"all\"");
      sub->add_option("--seed", o.seed, "base seed");
      sub->add_option("--cases", o.cases, "cases per suite")->check(CLI::NonNegativeNumber);
    }
    sub->add_option("--mode", o.mode, "exact or float (default from HYBRID_JACOBI_MODE, else exact)");
    sub->add_option("--epsilon", o.epsilon, "integrality tolerance in float mode, as a rational");
    sub->add_flag("--json", o.as_json, "machine-readable output");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run_command(command, o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InternalDisagreement ? kExitInternal : kExitInputError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace hybrid_jacobi
