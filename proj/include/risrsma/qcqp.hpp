#pragma once

#include <vector>

#include "risrsma/types.hpp"

namespace risrsma {

/// f(z) = z^T Q z + q^T z + r, with Q symmetric positive semidefinite.
struct QuadConstraint {
  RMatrix Q;
  RVector q;
  double r = 0.0;

  double value(const RVector& z) const { return z.dot(Q * z) + q.dot(z) + r; }
};

/// minimize cost^T z  subject to  f_i(z) <= 0 for every constraint.
struct QcqpProblem {
  RVector cost;
  std::vector<QuadConstraint> constraints;
};

struct QcqpOptions {
  double gap_tol = 1e-9;       // stop once m / t falls below this
  double t0 = 1.0;
  double t_growth = 16.0;
  double newton_tol = 1e-12;   // half squared Newton decrement
  int max_newton = 60;         // per centering step
};

struct QcqpResult {
  RVector z;
  double objective = 0.0;
  double gap_bound = 0.0;  // m / t at exit
  bool converged = false;
};

/// Log-barrier interior-point method. `z0` must be strictly feasible; every
/// returned iterate is.
QcqpResult solve_qcqp(const QcqpProblem& problem, RVector z0, const QcqpOptions& opts = {});

}  // namespace risrsma
