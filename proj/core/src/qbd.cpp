// SPDX-License-Identifier: Apache-2.0
#include "mg1/qbd.hpp"

#include <cmath>
#include <string>

#include "mg1/errors.hpp"

namespace mg1 {

namespace {

constexpr double kRoundoffFloor = -1e-14;

}  // namespace

QbdSolution solve(const QueueInstance& instance, const SolveOptions& options) {
  if (options.levels < 1) throw Error(ErrorKind::InvalidArgument, "levels must be at least 1");
  const double lambda = instance.lambda;
  if (!(lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "arrival rate must be nonnegative");
  if (!(instance.rho() < 1.0)) {
    throw Error(ErrorKind::Unstable, "utilization " + std::to_string(instance.rho()) + " is not below 1");
  }

  const PhaseType& ph = instance.service;
  const int m = ph.phases();
  const Matrix& s = ph.generator();
  const Vector& s0 = ph.exit_rates();
  const RowVector alpha = ph.alpha().transpose();
  const Matrix identity = Matrix::Identity(m, m);

  // R <- -(A0 + R^2 A2) A1^-1 with A2 = s0 alpha rank one, so
  // R <- lambda N + (R R s0)(alpha N) where N = (lambda I - S)^-1.
  const Matrix a1 = s - lambda * identity;
  const LuFactor a1_lu(a1);
  if (a1_lu.singular()) throw Error(ErrorKind::SingularGenerator, "A1 is singular");
  const Matrix n = -a1_lu.inverse();
  const Matrix lambda_n = lambda * n;
  const RowVector alpha_n = alpha * n;

  Matrix r = Matrix::Zero(m, m);
  long iter = 0;
  for (;;) {
    if (iter >= options.max_iterations) {
      throw Error(ErrorKind::NoConvergence, "rate matrix did not converge in " +
                                                std::to_string(options.max_iterations) + " iterations");
    }
    ++iter;
    const Vector rrs0 = r * (r * s0);
    Matrix next = lambda_n + rrs0 * alpha_n;
    const double change = (next - r).lpNorm<Eigen::Infinity>();
    r = std::move(next);
    if (change < options.tolerance) break;
  }

  // Boundary: [pi0 pi1] Q = 0 with Q = [[-lambda, lambda alpha], [s0, A1 + R A2]],
  // first balance column replaced by the normalization pi0 + pi1 (I-R)^-1 1 = 1.
  const LuFactor i_minus_r(identity - r);
  if (i_minus_r.singular()) throw Error(ErrorKind::NoConvergence, "I - R is singular");
  const Vector ones = Vector::Ones(m);
  const Vector level_mass = i_minus_r.solve(ones);

  Matrix q(m + 1, m + 1);
  q(0, 0) = -lambda;
  q.block(0, 1, 1, m) = lambda * alpha;
  q.block(1, 0, m, 1) = s0;
  q.block(1, 1, m, m) = a1 + (r * s0) * alpha;
  Matrix system = q;
  system(0, 0) = 1.0;
  system.block(1, 0, m, 1) = level_mass;
  RowVector rhs = RowVector::Zero(m + 1);
  rhs[0] = 1.0;
  const LuFactor boundary_lu(system, 0.0);
  const RowVector x = boundary_lu.solve_left(rhs);

  RowVector balance = x * q;
  balance[0] = 0.0;
  const double residual =
      std::max(balance.lpNorm<Eigen::Infinity>() / std::max(1.0, q.cwiseAbs().maxCoeff()),
               std::abs(x[0] + x.tail(m).dot(level_mass) - 1.0));
  if (!(residual < 1e-10)) {
    throw Error(ErrorKind::NoConvergence, "boundary residual " + std::to_string(residual));
  }

  QbdSolution sol;
  sol.rate = r;
  sol.empty_prob = x[0];
  sol.level_one = x.tail(m);
  sol.iterations = iter;
  sol.boundary_residual = residual;

  auto clamp = [](double p) {
    if (p < 0.0) {
      if (p < kRoundoffFloor) throw Error(ErrorKind::NoConvergence, "negative probability " + std::to_string(p));
      return 0.0;
    }
    return p;
  };

  auto& probs = sol.dist.probs;
  probs.resize(options.levels);
  probs[0] = clamp(sol.empty_prob);
  RowVector level = sol.level_one;  // pi_1 R^(n-1)
  for (int k = 1; k < options.levels; ++k) {
    probs[k] = clamp(level.sum());
    level = level * r;
  }
  // level now holds pi_1 R^(l-1)
  sol.dist.tail_mass = clamp(level.dot(level_mass));

  if (options.enforce_tail && sol.dist.tail_mass > options.epsilon) {
    throw Error(ErrorKind::TailTooHeavy, "tail mass " + std::to_string(sol.dist.tail_mass) + " beyond level " +
                                             std::to_string(options.levels - 1) + " exceeds epsilon");
  }
  return sol;
}

double mean_queue_length(const QbdSolution& solution) {
  const int l = solution.dist.levels();
  const int m = static_cast<int>(solution.rate.rows());
  double head = 0.0;
  for (int k = 1; k < l; ++k) head += k * solution.dist.probs[k];

  // sum_{n>=l} n pi_1 R^(n-1) 1 = pi_1 R^(l-1) [l (I-R)^-1 + R (I-R)^-2] 1
  const Matrix identity = Matrix::Identity(m, m);
  const LuFactor i_minus_r(identity - solution.rate);
  RowVector level = solution.level_one;
  for (int k = 1; k < l; ++k) level = level * solution.rate;
  const Vector once = i_minus_r.solve(Vector(Vector::Ones(m)));
  const Vector twice = i_minus_r.solve(once);
  const double tail = level.dot(l * once + solution.rate * twice);
  return head + tail;
}

double pollaczek_khinchine_mean(double lambda, double mean_service, double second_moment) {
  const double rho = lambda * mean_service;
  const double cv2 = second_moment / (mean_service * mean_service) - 1.0;
  return rho + rho * rho * (1.0 + cv2) / (2.0 * (1.0 - rho));
}

}  // namespace mg1
