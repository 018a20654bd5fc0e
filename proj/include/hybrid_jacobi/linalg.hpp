#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "hybrid_jacobi/numeric.hpp"

// Gaussian elimination kernels over an arbitrary field scalar. Rational
// instantiations are exact; double instantiations pivot on magnitude and treat
// tiny entries as zero.

namespace hybrid_jacobi::linalg {

template <typename Scalar>
struct ScalarOps {
  static bool is_zero(const Scalar& x) { return x == Scalar(0); }
  static bool better_pivot(const Scalar& candidate, const Scalar& current) {
    return is_zero(current) && !is_zero(candidate);
  }
};

template <>
struct ScalarOps<double> {
  static bool is_zero(double x) { return std::abs(x) < 1e-12; }
  static bool better_pivot(double candidate, double current) {
    return std::abs(candidate) > std::abs(current);
  }
};

/// Reduced row echelon form of [a], in place, with the pivot column list.
template <typename Scalar>
struct Echelon {
  MatrixX<Scalar> reduced;
  std::vector<Eigen::Index> pivot_columns;
  int row_swaps = 0;

  Eigen::Index rank() const { return static_cast<Eigen::Index>(pivot_columns.size()); }
};

template <typename Scalar>
Echelon<Scalar> row_reduce(MatrixX<Scalar> a, Eigen::Index columns_to_reduce = -1) {
  using Ops = ScalarOps<Scalar>;
  Echelon<Scalar> out;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = columns_to_reduce < 0 ? a.cols() : columns_to_reduce;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (pivot < 0 ? !Ops::is_zero(a(i, c)) : Ops::better_pivot(a(i, c), a(pivot, c))) {
        pivot = i;
      }
    }
    if (pivot < 0 || Ops::is_zero(a(pivot, c))) continue;
    if (pivot != r) {
      a.row(pivot).swap(a.row(r));
      ++out.row_swaps;
    }
    const Scalar inv = Scalar(1) / a(r, c);
    for (Eigen::Index j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || Ops::is_zero(a(i, c))) continue;
      const Scalar factor = a(i, c);
      for (Eigen::Index j = c; j < a.cols(); ++j) a(i, j) -= factor * a(r, j);
    }
    out.pivot_columns.push_back(c);
    ++r;
  }
  out.reduced = std::move(a);
  return out;
}

template <typename Scalar>
Eigen::Index rank(const MatrixX<Scalar>& a) {
  return row_reduce<Scalar>(a).rank();
}

template <typename Scalar>
Scalar determinant(MatrixX<Scalar> a) {
  using Ops = ScalarOps<Scalar>;
  const Eigen::Index n = a.rows();
  if (n != a.cols()) fail(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  Scalar det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = c; i < n; ++i) {
      if (pivot < 0 ? !Ops::is_zero(a(i, c)) : Ops::better_pivot(a(i, c), a(pivot, c))) {
        pivot = i;
      }
    }
    if (pivot < 0) return Scalar(0);
    if (pivot != c) {
      a.row(pivot).swap(a.row(c));
      det = -det;
    }
    det *= a(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      if (Ops::is_zero(a(i, c))) continue;
      const Scalar factor = a(i, c) / a(c, c);
      for (Eigen::Index j = c; j < n; ++j) a(i, j) -= factor * a(c, j);
    }
  }
  return det;
}

/// Some solution of a x = b (free variables set to zero), or nullopt when the
/// system is inconsistent.
template <typename Scalar>
std::optional<VectorX<Scalar>> solve(const MatrixX<Scalar>& a, const VectorX<Scalar>& b) {
  using Ops = ScalarOps<Scalar>;
  if (a.rows() != b.size()) fail(ErrorCode::DimensionMismatch, "right-hand side size");
  MatrixX<Scalar> augmented(a.rows(), a.cols() + 1);
  augmented.leftCols(a.cols()) = a;
  augmented.col(a.cols()) = b;
  const Echelon<Scalar> e = row_reduce<Scalar>(std::move(augmented), a.cols());
  for (Eigen::Index i = e.rank(); i < a.rows(); ++i) {
    if (!Ops::is_zero(e.reduced(i, a.cols()))) return std::nullopt;
  }
  VectorX<Scalar> x = VectorX<Scalar>::Constant(a.cols(), Scalar(0));
  for (Eigen::Index k = 0; k < e.rank(); ++k) {
    x(e.pivot_columns[static_cast<std::size_t>(k)]) = e.reduced(k, a.cols());
  }
  return x;
}

/// Unique solution of a square nonsingular system.
template <typename Scalar>
VectorX<Scalar> solve_unique(const MatrixX<Scalar>& a, const VectorX<Scalar>& b) {
  if (a.rows() != a.cols()) fail(ErrorCode::DimensionMismatch, "square system expected");
  const Echelon<Scalar> e = row_reduce<Scalar>(a);
  if (e.rank() != a.rows()) fail(ErrorCode::RankDeficient, "singular system");
  auto x = solve<Scalar>(a, b);
  return *x;
}

/// Inverse of a square nonsingular matrix.
template <typename Scalar>
MatrixX<Scalar> inverse(const MatrixX<Scalar>& a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) fail(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  MatrixX<Scalar> augmented(n, 2 * n);
  augmented.leftCols(n) = a;
  augmented.rightCols(n) = MatrixX<Scalar>::Identity(n, n);
  const Echelon<Scalar> e = row_reduce<Scalar>(std::move(augmented), n);
  if (e.rank() != n) fail(ErrorCode::RankDeficient, "singular matrix");
  return e.reduced.rightCols(n);
}

}  // namespace hybrid_jacobi::linalg

namespace hybrid_jacobi {

/// Coordinates of a vector with respect to a full-rank square generator matrix
/// (generators are columns), plus the verdict on integrality.
struct LatticeMembership {
  bool member = false;
  VectorQ coordinates;
};

LatticeMembership lattice_membership(const MatrixQ& generators, const VectorQ& v,
                                     const NumericMode& mode);

}  // namespace hybrid_jacobi
