#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hybrid_jacobi/linalg.hpp"

using namespace hybrid_jacobi;

TEST_CASE("rationals parse to lowest terms and print canonically") {
  CHECK(format_rational(parse_rational("3/6")) == "1/2");
  CHECK(format_rational(parse_rational("-4/2")) == "-2");
  CHECK(format_rational(parse_rational("+7")) == "7");
  CHECK(format_rational(parse_rational("0/5")) == "0");
  CHECK(parse_rational("2/4") == Rational(1, 2));
  for (const char* bad : {"", "1/", "/2", "1/0", "1.5", "a", "1//2", "--1", "1/-2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), Error);
  }
}

TEST_CASE("doubles convert exactly") {
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(rational_from_double(-3.0) == Rational(-3));
  CHECK(rational_from_double(0.0) == Rational(0));
  // 0.1 is the dyadic 3602879701896397 / 2^55.
  CHECK(format_rational(rational_from_double(0.1)) == "3602879701896397/36028797018963968");
}

TEST_CASE("floor and nearest integer") {
  CHECK(floor_of(Rational(7, 2)) == 3);
  CHECK(floor_of(Rational(-7, 2)) == -4);
  CHECK(floor_of(Rational(-4)) == -4);
  CHECK(nearest_integer(Rational(5, 3)) == 2);
  CHECK(nearest_integer(Rational(-5, 3)) == -2);
  CHECK(to_int64(Rational(-12)) == -12);
  CHECK_THROWS(to_int64(Rational(1, 2)));
}

TEST_CASE("integrality in exact and float mode") {
  const NumericMode exact = NumericMode::exact();
  CHECK(is_integral(Rational(3), exact));
  CHECK_FALSE(is_integral(Rational(1, 1000000000000LL), exact));

  const NumericMode fl = NumericMode::floating(Rational(1, 1000));
  CHECK(is_integral(Rational(2) + Rational(1, 10000), fl));
  CHECK_FALSE(is_integral(Rational(1, 2), fl));
  CHECK_FALSE(is_integral(Rational(2) + Rational(1, 50), fl));
  // Between epsilon and ten epsilon the answer would be a guess.
  try {
    is_integral(Rational(2) + Rational(5, 1000), fl);
    FAIL("expected AmbiguousInFloatMode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AmbiguousInFloatMode);
  }
}

TEST_CASE("complex vectors and their real form") {
  CVector z{Complex(Rational(1, 2), Rational(3)), Complex(Rational(-1), Rational(0))};
  const VectorQ r = realify(z);
  REQUIRE(r.size() == 4);
  CHECK(r(0) == Rational(1, 2));
  CHECK(r(1) == Rational(-1));
  CHECK(r(2) == Rational(3));
  CHECK(r(3) == Rational(0));
  CHECK(complexify(r) == z);
  CHECK(is_zero(z - z));
}

TEST_CASE("exact kernels against hand-computed values") {
  MatrixQ a(3, 3);
  a << Rational(2), Rational(-1), Rational(0), Rational(-1), Rational(2), Rational(-1), Rational(0), Rational(-1),
      Rational(2);
  // Cofactor expansion by hand: 2*(4-1) - (-1)*(-2-0) + 0 = 4.
  CHECK(linalg::determinant<Rational>(a) == Rational(4));
  CHECK(linalg::rank<Rational>(a) == 3);

  const MatrixQ inv = linalg::inverse<Rational>(a);
  CHECK((inv * a) == MatrixQ::Identity(3, 3));

  VectorQ b(3);
  b << Rational(1), Rational(0), Rational(1);
  const VectorQ x = linalg::solve_unique<Rational>(a, b);
  CHECK((a * x) == b);
  CHECK(x(0) == Rational(1));

  MatrixQ singular(2, 2);
  singular << Rational(1), Rational(2), Rational(2), Rational(4);
  CHECK(linalg::rank<Rational>(singular) == 1);
  CHECK(linalg::determinant<Rational>(singular) == Rational(0));
  CHECK_THROWS(linalg::solve_unique<Rational>(singular, VectorQ::Constant(2, Rational(1))));
}

TEST_CASE("the kernels are generic in the scalar") {
  Eigen::MatrixXd a(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;
  CHECK(linalg::determinant<double>(a) == doctest::Approx(3.0));
  const Eigen::VectorXd x = linalg::solve_unique<double>(a, Eigen::Vector2d(3.0, 3.0));
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(1.0));
}

TEST_CASE("lattice membership") {
  MatrixQ gens(2, 2);
  gens << Rational(2), Rational(1), Rational(1), Rational(2);
  VectorQ v(2);
  v << Rational(3), Rational(3);
  CHECK(lattice_membership(gens, v, NumericMode::exact()).member);
  v << Rational(1, 2), Rational(1, 2);
  const auto lm = lattice_membership(gens, v, NumericMode::exact());
  CHECK_FALSE(lm.member);
  CHECK(lm.coordinates(0) == Rational(1, 6));
}
