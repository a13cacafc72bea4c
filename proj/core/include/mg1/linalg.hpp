// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace mg1 {

using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Matrix = Eigen::MatrixXd;

/// LU factorization with partial pivoting that reports near-singularity.
///
/// A matrix is declared singular when some pivot of U has magnitude below
/// `relative_pivot_tol * max|A_ij|`.
class LuFactor {
 public:
  explicit LuFactor(const Matrix& a, double relative_pivot_tol = 1e-12);

  bool singular() const noexcept { return singular_; }
  double min_pivot() const noexcept { return min_pivot_; }

  /// Solves A x = b.
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;
  /// Solves x A = b for a row vector b.
  RowVector solve_left(const RowVector& b) const;
  Matrix inverse() const;

 private:
  Matrix a_;
  Eigen::PartialPivLU<Matrix> lu_;
  bool singular_ = false;
  double min_pivot_ = 0.0;
};

/// exp(A) by scaling and squaring with a Pade approximant.
Matrix expm(const Matrix& a);

/// Perron root of a nonnegative matrix by power iteration on A + I. The unit
/// shift makes the Perron root strictly dominant even for periodic matrices.
double spectral_radius(const Matrix& a, double tol = 1e-10, int max_iter = 100000);

}  // namespace mg1
