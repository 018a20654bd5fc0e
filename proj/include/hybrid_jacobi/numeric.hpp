#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include "hybrid_jacobi/errors.hpp"

namespace hybrid_jacobi {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixQ = MatrixX<Rational>;
using VectorQ = VectorX<Rational>;

/// Accepts "p" or "p/q" with an optional leading minus; the result is reduced.
Rational parse_rational(std::string_view text);
/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_rational(const Rational& value);
/// Exact dyadic value of a finite double.
Rational rational_from_double(double value);

bool is_integer(const Rational& value);
Integer floor_of(const Rational& value);
Integer nearest_integer(const Rational& value);
std::int64_t to_int64(const Rational& value);

VectorQ zero_vector(Eigen::Index size);

/// Exact complex number with rational parts.
struct Complex {
  Rational re;
  Rational im;

  Complex() = default;
  Complex(Rational real, Rational imag = Rational(0)) : re(std::move(real)), im(std::move(imag)) {}

  Complex& operator+=(const Complex& other) {
    re += other.re;
    im += other.im;
    return *this;
  }
  Complex& operator-=(const Complex& other) {
    re -= other.re;
    im -= other.im;
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
  friend Complex operator*(const Rational& k, const Complex& a) { return Complex(k * a.re, k * a.im); }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
  bool is_zero() const { return re == 0 && im == 0; }
};

/// A point of C^g.
using CVector = std::vector<Complex>;

CVector zero_cvector(std::size_t dim);
CVector& add_scaled(CVector& acc, const Rational& k, const CVector& v);
CVector operator+(const CVector& a, const CVector& b);
CVector operator-(const CVector& a, const CVector& b);
bool is_zero(const CVector& v);

/// Real coordinates of z in C^g: the g real parts followed by the g imaginary parts.
VectorQ realify(const CVector& z);
CVector complexify(const VectorQ& real);

/// Exact mode decides integrality exactly; float mode accepts coordinates within
/// epsilon of an integer, rejects those beyond 10*epsilon, and refuses to guess
/// in between.
struct NumericMode {
  enum class Kind { Exact, Float };

  Kind kind = Kind::Exact;
  Rational epsilon = Rational(1, 1000000000);

  static NumericMode exact() { return {}; }
  static NumericMode floating(Rational eps = Rational(1, 1000000000)) {
    return {Kind::Float, std::move(eps)};
  }
  bool is_exact() const { return kind == Kind::Exact; }
};

/// Throws AmbiguousInFloatMode inside the float-mode ambiguity band.
bool is_integral(const Rational& value, const NumericMode& mode);
bool all_integral(const VectorQ& values, const NumericMode& mode);

}  // namespace hybrid_jacobi
