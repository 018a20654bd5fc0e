// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <string>

#include "hybrid_jacobi/io.hpp"
#include "hybrid_jacobi/verify.hpp"

using namespace hybrid_jacobi;

namespace {

// Limits are fixed here so a slow or loose run cannot pass by configuration.
constexpr double kFigureSeconds = 0.1;
constexpr double kTreeTheoremSeconds = 5.0;
constexpr double kOracleSeconds = 30.0;
constexpr double kExtensionSeconds = 30.0;
constexpr double kPrincipalSeconds = 60.0;
constexpr double kSesSeconds = 60.0;
constexpr double kChipFiringSeconds = 10.0;

constexpr int kTreeTheoremGraphs = 20;
constexpr int kOracleGraphs = 20;            // 10 divisors each
constexpr int kExtensionCases = 50;          // 2 graph functions each
constexpr int kPrincipalCases = 50;          // 2 hybrid functions each
constexpr int kSesRandomInstances = 50;      // after the three fixtures
constexpr int kChipFiringFunctions = 100;
constexpr int kSerializationInstances = 50;

constexpr std::uint64_t kSeed = 20240601;
constexpr double kNoLimit = std::numeric_limits<double>::infinity();

int failures = 0;
int total_disagreements = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
  if (!ok) ++failures;
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

verify::SuiteResult suite(const std::string& name, int cases, int max_edges = 6) {
  verify::InstanceSeed s;
  s.seed = kSeed;
  s.max_edges = max_edges;
  verify::SuiteResult r = verify::run_property_suite(name, s, cases);
  total_disagreements += r.disagreements;
  return r;
}

void suite_criterion(const std::string& label, const verify::SuiteResult& r, int expected_cases, int minimum_checks,
                     double limit) {
  const bool ok = r.passed() && r.cases >= expected_cases && r.checks >= minimum_checks && r.seconds < limit;
  std::string detail = std::to_string(r.cases) + " cases, " + std::to_string(r.checks) + " checks, " +
                       std::to_string(r.failures.size()) + " failures, " + seconds(r.seconds);
  detail += limit < kNoLimit ? " (limit " + seconds(limit) + ")" : " (no time limit)";
  if (!r.failures.empty()) detail += "; first failure: " + r.failures.front().message;
  report(label, ok, detail);
}

}  // namespace

int main() {
  {
    const auto start = std::chrono::steady_clock::now();
    const MCRS m = io::parse_instance(io::read_json_file(std::string(TEST_DATA_DIR) + "/fig1.json"));
    const int genus = m.genus;
    const int rank = homology_rank(m);
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report("fig1 fixture", genus == 3 && rank == 5 && t < kFigureSeconds,
           "genus " + std::to_string(genus) + " (expected 3), rank " + std::to_string(rank) + " (expected 5), " +
               seconds(t) + " (limit " + seconds(kFigureSeconds) + ")");
  }

  suite_criterion("matrix-tree cross-check", suite("tree-theorem", kTreeTheoremGraphs, 8), kTreeTheoremGraphs,
                  kTreeTheoremGraphs, kTreeTheoremSeconds);
  suite_criterion("tropical oracle agreement", suite("oracle-agreement", kOracleGraphs), kOracleGraphs,
                  10 * kOracleGraphs, kOracleSeconds);
  suite_criterion("extension to zero", suite("extension-zero", kExtensionCases), kExtensionCases,
                  2 * kExtensionCases, kExtensionSeconds);
  suite_criterion("hybrid principality (both directions)", suite("principal", kPrincipalCases), kPrincipalCases,
                  4 * kPrincipalCases, kPrincipalSeconds);
  const verify::SuiteResult ses = suite("ses", kSesRandomInstances);
  suite_criterion("exact sequence checks", ses, kSesRandomInstances + 3, kSesRandomInstances + 3, kSesSeconds);
  suite_criterion("chip-firing decomposition", suite("chipfire", kChipFiringFunctions), kChipFiringFunctions,
                  kChipFiringFunctions, kChipFiringSeconds);
  suite_criterion("round-trip serialization", suite("serialization", kSerializationInstances), kSerializationInstances,
                  kSerializationInstances, kNoLimit);

  // Route agreement also covers the suites that only run here for this purpose.
  for (const char* extra : {"diagram", "invariance"}) {
    const verify::SuiteResult r = suite(extra, 20);
    if (!r.passed()) {
      std::cout << "note: " << r.summary() << "\n";
    }
  }
  report("route agreement", total_disagreements == 0,
         std::to_string(total_disagreements) + " internal disagreements across all suites");

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
