// SPDX-License-Identifier: Apache-2.0
#include "mg1/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace mg1 {

LuFactor::LuFactor(const Matrix& a, double relative_pivot_tol) : a_(a), lu_(a) {
  const double scale = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  const auto diag = lu_.matrixLU().diagonal().cwiseAbs();
  min_pivot_ = diag.size() == 0 ? 0.0 : diag.minCoeff();
  singular_ = !(min_pivot_ >= relative_pivot_tol * scale) || scale == 0.0;
}

Vector LuFactor::solve(const Vector& b) const { return lu_.solve(b); }

Matrix LuFactor::solve(const Matrix& b) const { return lu_.solve(b); }

RowVector LuFactor::solve_left(const RowVector& b) const {
  // x A = b  <=>  A^T x^T = b^T
  const Eigen::PartialPivLU<Matrix> transposed(a_.transpose());
  return transposed.solve(b.transpose()).transpose();
}

Matrix LuFactor::inverse() const { return lu_.inverse(); }

Matrix expm(const Matrix& a) { return a.exp(); }

double spectral_radius(const Matrix& a, double tol, int max_iter) {
  if (a.rows() == 0) return 0.0;
  Vector v = Vector::Ones(a.rows());
  double estimate = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = a * v + v;
    const double norm = w.lpNorm<Eigen::Infinity>();
    w /= norm;
    const double next = norm - 1.0;
    if (std::abs(next - estimate) <= tol && (w - v).lpNorm<Eigen::Infinity>() <= tol) {
      return next;
    }
    estimate = next;
    v = w;
  }
  return estimate;
}

}  // namespace mg1
