#pragma once

#include <stdexcept>
#include <string>

namespace hybrid_jacobi {

enum class ErrorCode {
  Parse,
  Disconnected,
  NonpositiveLength,
  DuplicateId,
  UnknownId,
  PlaceOffGraph,
  NonzeroDegree,
  NonIntegerSlope,
  DegenerateLattice,
  MarkedSlotMismatch,
  DimensionMismatch,
  UnknownPoint,
  SlotBijectionBroken,
  RankDeficient,
  PlaceOffComplex,
  MissingBasepointPoint,
  NotConverged,
  IrrationalTargetInExactMode,
  AmbiguousInFloatMode,
  BoundsInfeasible,
  UnknownSuite,
  InvalidFunction,
  InternalDisagreement,
};

const char* to_string(ErrorCode code);

/// Every failure the library reports carries one of the codes above; the CLI
/// maps InternalDisagreement to its own exit status and everything else to
/// "bad input".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace hybrid_jacobi
