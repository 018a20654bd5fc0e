#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybrid_jacobi/hybrid.hpp"

namespace hybrid_jacobi::verify {

/// Small deterministic generator: identical output for identical seeds on
/// every platform (the standard distributions are not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// p/q with 1 <= q <= max_den and |p/q| <= bound.
  Rational rational(std::int64_t bound, std::int64_t max_den);
  /// Same but strictly positive.
  Rational positive_rational(std::int64_t bound, std::int64_t max_den);
  bool coin() { return uniform(0, 1) == 1; }

 private:
  std::mt19937_64 engine_;
};

/// Mixes a seed with a case index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct InstanceSeed {
  std::uint64_t seed = 0;
  int max_vertices = 4;
  int max_edges = 6;
  int max_genus = 2;
  int coeff_bound = 5;
  int denominator_bound = 60;
};

struct RandomInstance {
  MCRS complex;
  std::vector<HybridDivisor> divisors;      // degree zero
  std::vector<PLFunction> pl_functions;     // integer slopes
  std::vector<HybridFunction> functions;    // valid hybrid functions
};

/// Throws BoundsInfeasible.
RandomInstance random_instance(const InstanceSeed& s);
/// Metric graph only.
MetricGraph random_graph(Rng& rng, const InstanceSeed& s);
/// Integer-slope function built as an integer combination of clamped
/// distance functions.
PLFunction random_pl_function(Rng& rng, const MetricGraph& g, const InstanceSeed& s);
TropicalDivisor random_tropical_divisor(Rng& rng, const MetricGraph& g, const InstanceSeed& s);

/// Independent check of det(period matrix): product of all lengths times the
/// determinant of a reduced Laplacian with conductances 1/length.
Rational matrix_tree_oracle(const MetricGraph& g);

/// Fixtures shared by tests, the acceptance run and the CLI.
MetricGraph fixture_theta();
MCRS fixture_edge();
/// `w` is the image of the head marked point.
MCRS fixture_loop(const Complex& w = Complex(Rational(1, 3), Rational(1, 5)));
MCRS fixture_fig1();

struct SuiteResult {
  struct Failure {
    int case_index = 0;
    std::uint64_t seed = 0;
    std::string message;
  };

  std::string name;
  int cases = 0;
  int checks = 0;
  int disagreements = 0;  // InternalDisagreement raised while running
  std::vector<Failure> failures;
  double seconds = 0;

  bool passed() const { return failures.empty(); }
  nlohmann::json to_json() const;
  std::string summary() const;
};

std::vector<std::string> suite_names();

/// Throws UnknownSuite. Suites: tree-theorem, oracle-agreement,
/// extension-zero, diagram, ses, chipfire, invariance, principal,
/// serialization.
SuiteResult run_property_suite(const std::string& name, const InstanceSeed& seed, int cases);

}  // namespace hybrid_jacobi::verify
