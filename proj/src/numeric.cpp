#include <cmath>
#include <limits>

#include "hybrid_jacobi/linalg.hpp"
#include "hybrid_jacobi/numeric.hpp"

namespace hybrid_jacobi {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NonpositiveLength: return "NonpositiveLength";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::PlaceOffGraph: return "PlaceOffGraph";
    case ErrorCode::NonzeroDegree: return "NonzeroDegree";
    case ErrorCode::NonIntegerSlope: return "NonIntegerSlope";
    case ErrorCode::DegenerateLattice: return "DegenerateLattice";
    case ErrorCode::MarkedSlotMismatch: return "MarkedSlotMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::SlotBijectionBroken: return "SlotBijectionBroken";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::PlaceOffComplex: return "PlaceOffComplex";
    case ErrorCode::MissingBasepointPoint: return "MissingBasepointPoint";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::IrrationalTargetInExactMode: return "IrrationalTargetInExactMode";
    case ErrorCode::AmbiguousInFloatMode: return "AmbiguousInFloatMode";
    case ErrorCode::BoundsInfeasible: return "BoundsInfeasible";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::InvalidFunction: return "InvalidFunction";
    case ErrorCode::InternalDisagreement: return "InternalDisagreement";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    fail(ErrorCode::Parse, "malformed rational \"" + std::string(text) + "\"");
  }
  Integer n{std::string(num)};
  Integer d{std::string(den)};
  if (d == 0) fail(ErrorCode::Parse, "zero denominator in \"" + std::string(text) + "\"");
  if (negative) n = -n;
  return Rational(n, d);
}

std::string format_rational(const Rational& value) {
  const Integer n = numerator(value);
  const Integer d = denominator(value);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) fail(ErrorCode::Parse, "non-finite number");
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an exact integer for IEEE doubles.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  const Rational result{Integer(scaled)};
  const int shift = exponent - 53;
  Integer power(1);
  power <<= static_cast<unsigned>(shift < 0 ? -shift : shift);
  if (shift < 0) return result / Rational(power);
  return result * Rational(power);
}

bool is_integer(const Rational& value) { return denominator(value) == 1; }

Integer floor_of(const Rational& value) {
  const Integer n = numerator(value);
  const Integer d = denominator(value);
  Integer q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

Integer nearest_integer(const Rational& value) { return floor_of(value + Rational(1, 2)); }

std::int64_t to_int64(const Rational& value) {
  if (!is_integer(value)) fail(ErrorCode::Parse, "expected an integer, got " + format_rational(value));
  const Integer n = numerator(value);
  if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min()) {
    fail(ErrorCode::Parse, "integer out of range");
  }
  return n.convert_to<std::int64_t>();
}

VectorQ zero_vector(Eigen::Index size) { return VectorQ::Constant(size, Rational(0)); }

CVector zero_cvector(std::size_t dim) { return CVector(dim); }

CVector& add_scaled(CVector& acc, const Rational& k, const CVector& v) {
  if (acc.size() != v.size()) fail(ErrorCode::DimensionMismatch, "complex vector sizes differ");
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += k * v[i];
  return acc;
}

CVector operator+(const CVector& a, const CVector& b) {
  CVector out = a;
  return add_scaled(out, Rational(1), b);
}

CVector operator-(const CVector& a, const CVector& b) {
  CVector out = a;
  return add_scaled(out, Rational(-1), b);
}

bool is_zero(const CVector& v) {
  for (const auto& z : v) {
    if (!z.is_zero()) return false;
  }
  return true;
}

VectorQ realify(const CVector& z) {
  const auto g = static_cast<Eigen::Index>(z.size());
  VectorQ out(2 * g);
  for (Eigen::Index i = 0; i < g; ++i) {
    out(i) = z[static_cast<std::size_t>(i)].re;
    out(g + i) = z[static_cast<std::size_t>(i)].im;
  }
  return out;
}

CVector complexify(const VectorQ& real) {
  if (real.size() % 2 != 0) fail(ErrorCode::DimensionMismatch, "odd real dimension");
  const Eigen::Index g = real.size() / 2;
  CVector out(static_cast<std::size_t>(g));
  for (Eigen::Index i = 0; i < g; ++i) out[static_cast<std::size_t>(i)] = Complex(real(i), real(g + i));
  return out;
}

bool is_integral(const Rational& value, const NumericMode& mode) {
  if (mode.is_exact()) return is_integer(value);
  const Rational distance = abs(value - Rational(nearest_integer(value)));
  if (distance <= mode.epsilon) return true;
  if (distance >= 10 * mode.epsilon) return false;
  fail(ErrorCode::AmbiguousInFloatMode,
       "coordinate " + format_rational(value) + " lies in the ambiguity band around an integer");
}

bool all_integral(const VectorQ& values, const NumericMode& mode) {
  bool all = true;
  // Every coordinate is classified so an ambiguous one is reported even when
  // another is clearly non-integral.
  for (Eigen::Index i = 0; i < values.size(); ++i) all = is_integral(values(i), mode) && all;
  return all;
}

LatticeMembership lattice_membership(const MatrixQ& generators, const VectorQ& v, const NumericMode& mode) {
  if (generators.rows() != v.size()) fail(ErrorCode::DimensionMismatch, "vector does not match lattice dimension");
  LatticeMembership out;
  if (generators.cols() == 0) {
    out.coordinates = VectorQ(0);
    out.member = v.size() == 0;
    return out;
  }
  auto x = linalg::solve<Rational>(generators, v);
  if (!x) fail(ErrorCode::RankDeficient, "vector outside the span of the lattice");
  out.coordinates = std::move(*x);
  out.member = all_integral(out.coordinates, mode);
  return out;
}

}  // namespace hybrid_jacobi
