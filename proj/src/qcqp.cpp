#include "risrsma/qcqp.hpp"

#include <cmath>
#include <limits>

namespace risrsma {

namespace {

struct BarrierEval {
  double value = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

BarrierEval barrier_value(const QcqpProblem& p, const RVector& z, double t) {
  double phi = t * p.cost.dot(z);
  for (const auto& c : p.constraints) {
    const double f = c.value(z);
    if (!(f < 0.0)) return {};
    phi -= std::log(-f);
  }
  return {phi, true};
}

}  // namespace

QcqpResult solve_qcqp(const QcqpProblem& p, RVector z, const QcqpOptions& opts) {
  const auto n = z.size();
  const double m = static_cast<double>(p.constraints.size());
  if (p.cost.size() != n) throw std::invalid_argument("QCQP cost/start dimension mismatch");
  for (const auto& c : p.constraints) {
    if (c.Q.rows() != n || c.Q.cols() != n || c.q.size() != n) {
      throw std::invalid_argument("QCQP constraint dimension mismatch");
    }
  }
  if (!barrier_value(p, z, opts.t0).feasible) {
    throw std::invalid_argument("QCQP start point is not strictly feasible");
  }

  QcqpResult out;
  double t = opts.t0;
  RVector grad(n);
  RMatrix hess(n, n);
  std::vector<RVector> cgrad(p.constraints.size());
  std::vector<double> fval(p.constraints.size());

  while (true) {
    bool stalled = false;
    for (int it = 0; it < opts.max_newton; ++it) {
      grad = t * p.cost;
      hess.setZero();
      for (size_t i = 0; i < p.constraints.size(); ++i) {
        const auto& c = p.constraints[i];
        cgrad[i] = 2.0 * (c.Q * z) + c.q;
        fval[i] = z.dot(c.Q * z) + c.q.dot(z) + c.r;
        const double inv = -1.0 / fval[i];
        grad += inv * cgrad[i];
        hess.noalias() += (2.0 * inv) * c.Q;
        hess.selfadjointView<Eigen::Lower>().rankUpdate(cgrad[i], inv * inv);
      }
      hess.triangularView<Eigen::Upper>() = hess.transpose();
      Eigen::LDLT<RMatrix> ldlt(hess);
      RVector step = -ldlt.solve(grad);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        stalled = true;
        break;
      }
      const double decrement = -grad.dot(step);
      if (decrement * 0.5 <= opts.newton_tol) break;
      if (decrement <= 0.0) {
        stalled = true;
        break;
      }

      const double phi0 = barrier_value(p, z, t).value;
      double s = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 80; ++ls) {
        const RVector trial = z + s * step;
        const auto ev = barrier_value(p, trial, t);
        if (ev.feasible && ev.value <= phi0 - 0.25 * s * decrement) {
          z = trial;
          accepted = true;
          break;
        }
        s *= 0.5;
      }
      if (!accepted) {
        stalled = true;
        break;
      }
    }
    out.gap_bound = m / t;
    if (stalled) break;
    if (m / t < opts.gap_tol) {
      out.converged = true;
      break;
    }
    t *= opts.t_growth;
  }
  out.z = std::move(z);
  out.objective = p.cost.dot(out.z);
  return out;
}

}  // namespace risrsma
