#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hybrid_jacobi/io.hpp"
#include "hybrid_jacobi/verify.hpp"

using namespace hybrid_jacobi;
using io::json;

namespace {

std::string data(const char* name) { return std::string(TEST_DATA_DIR) + "/" + name; }

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("rationals and complex numbers") {
  const io::ReadContext exact{NumericMode::exact(), false};
  CHECK(io::read_rational("6/4", exact, "x") == Rational(3, 2));
  CHECK(io::write_rational(Rational(3, 2), NumericMode::exact()) == "3/2");
  CHECK(io::write_rational(Rational(-4), NumericMode::exact()) == "-4");
  CHECK_THROWS_AS(io::read_rational(json(0.5), exact, "x"), Error);
  CHECK(message_of([&] { io::read_rational(json(0.5), exact, "lengths[2]"); }).find("lengths[2]") != std::string::npos);

  const io::ReadContext fl{NumericMode::floating(), true};
  CHECK(io::read_rational(json(0.5), fl, "x") == Rational(1, 2));
  const Complex z = io::read_complex(json{{"re", "1/3"}, {"im", "-2"}}, exact, "z");
  CHECK(z == Complex(Rational(1, 3), Rational(-2)));
  CHECK(io::write_complex(z, NumericMode::exact()) == json{{"re", "1/3"}, {"im", "-2"}});
}

TEST_CASE("float banner") {
  const json plain = json::object();
  CHECK_FALSE(io::context_for(plain, NumericMode::floating()).numbers_allowed);
  const json banner = {{"mode", "float"}};
  CHECK(io::context_for(banner, NumericMode::floating()).numbers_allowed);
  CHECK_THROWS_AS(io::context_for(banner, NumericMode::exact()), Error);
  CHECK_THROWS_AS(io::context_for(json{{"mode", "fuzzy"}}, NumericMode::exact()), Error);
}

TEST_CASE("instances round-trip through the canonical form") {
  for (const char* name : {"edge.json", "fig1.json", "loop.json"}) {
    CAPTURE(name);
    const json doc = io::read_json_file(data(name));
    const MCRS m = io::parse_instance(doc);
    const std::string once = io::canonical_dump(io::instance_to_json(m));
    CHECK(io::canonicalize_instance(once) == once);
    const MCRS again = io::parse_instance(json::parse(once));
    CHECK(again.genus == m.genus);
    CHECK(homology_rank(again) == homology_rank(m));
    CHECK(io::canonical_dump(io::instance_to_json(again)) == once);
  }
  CHECK(io::parse_instance(io::read_json_file(data("fig1.json"))).genus == 3);
}

TEST_CASE("fixture files match the built-in fixtures") {
  CHECK(io::canonical_dump(io::instance_to_json(io::parse_instance(io::read_json_file(data("edge.json"))))) ==
        io::canonical_dump(io::instance_to_json(verify::fixture_edge())));
  CHECK(io::canonical_dump(io::instance_to_json(io::parse_instance(io::read_json_file(data("fig1.json"))))) ==
        io::canonical_dump(io::instance_to_json(verify::fixture_fig1())));
  CHECK(io::canonical_dump(io::instance_to_json(io::parse_instance(io::read_json_file(data("loop.json"))))) ==
        io::canonical_dump(io::instance_to_json(verify::fixture_loop())));
}

TEST_CASE("random instances round-trip") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    verify::InstanceSeed s;
    s.seed = seed;
    const verify::RandomInstance inst = verify::random_instance(s);
    const json doc = io::instance_to_json(inst.complex);
    const MCRS back = io::parse_instance(json::parse(io::canonical_dump(doc)));
    CHECK(io::instance_to_json(back) == doc);
    for (const auto& d : inst.divisors) {
      CHECK(io::parse_divisor(io::divisor_to_json(inst.complex, d), back) == d);
    }
    for (const auto& f : inst.functions) {
      const HybridFunction g = io::parse_function(io::function_to_json(inst.complex, f), back);
      CHECK(same_function(back.graph, g.graph_part, f.graph_part));
      CHECK(g.vertex_classes == f.vertex_classes);
    }
  }
}

TEST_CASE("errors name the offending field") {
  const json good = io::read_json_file(data("edge.json"));

  json bad_length = good;
  bad_length["graph"]["edges"][0]["length"] = "0";
  try {
    io::parse_instance(bad_length);
    FAIL("accepted zero length");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonpositiveLength);
  }

  json numeric = good;
  numeric["graph"]["edges"][0]["length"] = 1.5;
  CHECK(message_of([&] { io::parse_instance(numeric); }).find("graph.edges[0].length") != std::string::npos);

  json lattice = good;
  lattice["surfaces"]["v1"]["lattice"][0] = json::array({json{{"re", "x"}, {"im", "0"}}});
  CHECK(message_of([&] { io::parse_instance(lattice); }).find("surfaces.v1.lattice[0]") != std::string::npos);

  json missing_slot = good;
  missing_slot["surfaces"]["v1"]["marked"] = json::object();
  try {
    io::parse_instance(missing_slot);
    FAIL("accepted a missing marked point");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SlotBijectionBroken);
  }

  const MCRS m = io::parse_instance(good);
  const json unknown = json::array({json{{"place", {{"surface", "v1"}, {"point", "zz"}}}, {"coeff", 1}}});
  try {
    io::parse_divisor(unknown, m);
    FAIL("accepted an unknown point");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownPoint);
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
  }
  CHECK_THROWS_AS(io::read_json_file(data("does-not-exist.json")), Error);
}

TEST_CASE("float-mode documents") {
  const MCRS m = verify::fixture_edge();
  const json doc = {{"mode", "float"},
                    {"terms", json::array({json{{"place", {{"edge", "e"}, {"offset", 0.25}}}, {"coeff", 1}},
                                           json{{"place", {{"surface", "v1"}, {"marked", "e"}}}, {"coeff", -1}}})}};
  const HybridDivisor d = io::parse_divisor(doc, m, NumericMode::floating());
  CHECK(d[HybridPlace::on_edge(m.graph, 0, Rational(1, 4))] == 1);
  CHECK_THROWS_AS(io::parse_divisor(doc, m, NumericMode::exact()), Error);
}

TEST_CASE("slot keys") {
  const MCRS loop = verify::fixture_loop();
  CHECK(io::slot_key(loop.graph, EdgeSlot{0, End::Head}) == "e:head");
  CHECK(io::parse_slot_key(loop.graph, 0, "e:tail") == EdgeSlot{0, End::Tail});
  CHECK_THROWS_AS(io::parse_slot_key(loop.graph, 0, "e"), Error);
  const MCRS edge = verify::fixture_edge();
  CHECK(io::slot_key(edge.graph, EdgeSlot{0, End::Tail}) == "e");
  CHECK(io::parse_slot_key(edge.graph, 1, "e") == EdgeSlot{0, End::Head});
}

TEST_CASE("coordinates and verdicts") {
  const MCRS m = verify::fixture_fig1();
  const Frame frame = default_frame(m);
  HybridDivisor d;
  d.add(HybridPlace::surface_point(0, SurfacePointRef::named("a")), 1);
  d.add(HybridPlace::surface_point(2, SurfacePointRef::named("a")), -1);
  const HybridCoordinates c = aj_hybrid(m, frame, d);
  const json doc = io::coordinates_to_json(m, frame, c);
  Frame back_frame;
  const HybridCoordinates back = io::parse_coordinates(doc, m, NumericMode::exact(), &back_frame);
  CHECK(back == c);
  CHECK(back_frame.base_vertex == frame.base_vertex);
  CHECK(back_frame.basis.non_tree_edges == frame.basis.non_tree_edges);

  const json verdict = io::verdict_to_json(m, is_principal_hybrid(m, d));
  CHECK(verdict.contains("principal"));
}
