#pragma once

#include <string>

#include <json.hpp>

#include "hybrid_jacobi/hybrid.hpp"

namespace hybrid_jacobi::io {

using nlohmann::json;

/// Rationals travel as "p/q" strings. JSON numbers are accepted only in float
/// mode and only inside documents carrying the top-level "mode":"float" banner.
struct ReadContext {
  NumericMode mode;
  bool numbers_allowed = false;
};

/// Checks the banner of an object document against the mode.
ReadContext context_for(const json& doc, const NumericMode& mode);

Rational read_rational(const json& j, const ReadContext& ctx, const std::string& field);
json write_rational(const Rational& value, const NumericMode& mode);
Complex read_complex(const json& j, const ReadContext& ctx, const std::string& field);
json write_complex(const Complex& z, const NumericMode& mode);

MCRS parse_instance(const json& doc, const NumericMode& mode = NumericMode::exact());
json instance_to_json(const MCRS& m, const NumericMode& mode = NumericMode::exact());

/// Sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const json& doc);
/// parse then print; idempotent on its own output.
std::string canonicalize_instance(const std::string& text, const NumericMode& mode = NumericMode::exact());

/// Edge id for ordinary edges, "e:tail" / "e:head" for loops.
std::string slot_key(const MetricGraph& g, const EdgeSlot& slot);
EdgeSlot parse_slot_key(const MetricGraph& g, std::size_t vertex, const std::string& key);

/// A list of {"place", "coeff"}, or {"mode", "terms": [...]}.
HybridDivisor parse_divisor(const json& doc, const MCRS& m, const NumericMode& mode = NumericMode::exact());
json divisor_to_json(const MCRS& m, const HybridDivisor& d, const NumericMode& mode = NumericMode::exact());

/// Places are {"vertex"} or {"edge", "offset"}.
TropicalDivisor parse_tropical_divisor(const json& doc, const MetricGraph& g,
                                       const NumericMode& mode = NumericMode::exact());
json tropical_divisor_to_json(const MetricGraph& g, const TropicalDivisor& d,
                              const NumericMode& mode = NumericMode::exact());

/// List of {"place", "value"} covering every vertex.
PLFunction parse_pl_function(const json& doc, const MetricGraph& g, const ReadContext& ctx);
json pl_function_to_json(const MetricGraph& g, const PLFunction& f, const NumericMode& mode = NumericMode::exact());

/// {"graph_part": [...], "vertex_classes": {vertex: [{"place", "coeff"}]}}.
HybridFunction parse_function(const json& doc, const MCRS& m, const NumericMode& mode = NumericMode::exact());
json function_to_json(const MCRS& m, const HybridFunction& f, const NumericMode& mode = NumericMode::exact());

json frame_to_json(const MCRS& m, const Frame& frame);
Frame parse_frame(const json& doc, const MCRS& m);

/// {"blocks": {vertex: [complex]}, "gamma": [rational], "frame": {...}}; blocks
/// of genus-0 surfaces are omitted and missing blocks read as zero.
HybridCoordinates parse_coordinates(const json& doc, const MCRS& m, const NumericMode& mode, Frame* frame = nullptr);
json coordinates_to_json(const MCRS& m, const Frame& frame, const HybridCoordinates& c,
                         const NumericMode& mode = NumericMode::exact());

json verdict_to_json(const MCRS& m, const HybridVerdict& v, const NumericMode& mode = NumericMode::exact());
json move_to_json(const MetricGraph& g, const ChipFiringMove& move, const NumericMode& mode = NumericMode::exact());

/// Reads a whole file; Parse error naming the path on failure.
json read_json_file(const std::string& path);

}  // namespace hybrid_jacobi::io
