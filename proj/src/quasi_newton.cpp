#include "risrsma/quasi_newton.hpp"

#include <cmath>

namespace risrsma {

RVector fd_gradient(const std::function<double(const RVector&)>& f, const RVector& x,
                    double step, int* evaluations) {
  RVector g(x.size());
  RVector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = f(probe);
    probe[i] = x[i] - step;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * step);
  }
  if (evaluations) *evaluations += static_cast<int>(2 * x.size());
  return g;
}

BfgsResult bfgs_minimize(const std::function<double(const RVector&)>& f, RVector x,
                         const BfgsOptions& opts) {
  const auto n = x.size();
  BfgsResult out;
  double fx = f(x);
  out.evaluations = 1;
  if (n == 0) {
    out.x = std::move(x);
    out.f = fx;
    return out;
  }
  RVector g = fd_gradient(f, x, opts.fd_step, &out.evaluations);
  RMatrix hinv = RMatrix::Identity(n, n);
  bool scaled = false;
  bool fresh_metric = true;
  constexpr double armijo = 1e-4;

  for (int it = 0; it < opts.max_iters; ++it) {
    out.iterations = it;
    if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol) break;

    RVector dir = -hinv * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      dir = -g;
      slope = g.dot(dir);
    }

    double alpha = 1.0;
    bool accepted = false;
    RVector x_new;
    double f_new = fx;
    for (int ls = 0; ls < opts.ls_max; ++ls) {
      x_new = x + alpha * dir;
      f_new = f(x_new);
      ++out.evaluations;
      if (f_new < fx && f_new <= fx + armijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) {
      // One retry along steepest descent before giving up.
      if (fresh_metric) break;
      hinv.setIdentity();
      scaled = false;
      fresh_metric = true;
      continue;
    }
    fresh_metric = false;

    const RVector g_new = fd_gradient(f, x_new, opts.fd_step, &out.evaluations);
    const RVector s = x_new - x;
    const RVector y = g_new - g;
    const double sy = s.dot(y);
    const double decrease = fx - f_new;

    x = x_new;
    g = g_new;
    const double f_prev = fx;
    fx = f_new;

    if (sy > 1e-14 * s.norm() * y.norm()) {
      if (!scaled) {
        hinv *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const RVector hy = hinv * y;
      hinv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
              rho * (hy * s.transpose() + s * hy.transpose());
    }
    if (decrease <= opts.f_tol * std::max(1.0, std::abs(f_prev))) {
      out.iterations = it + 1;
      break;
    }
  }
  out.x = std::move(x);
  out.f = fx;
  return out;
}

}  // namespace risrsma
