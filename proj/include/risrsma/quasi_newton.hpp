#pragma once

#include <functional>

#include "risrsma/types.hpp"

namespace risrsma {

struct BfgsOptions {
  double fd_step = 1e-6;     // central-difference step
  double backtrack = 0.5;    // line-search contraction
  int ls_max = 30;
  int max_iters = 100;
  double grad_tol = 1e-9;    // infinity norm
  double f_tol = 1e-12;      // relative decrease per iteration
};

struct BfgsResult {
  RVector x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

/// Central finite-difference gradient.
RVector fd_gradient(const std::function<double(const RVector&)>& f, const RVector& x,
                    double step, int* evaluations = nullptr);

/// BFGS inverse-Hessian minimizer with Armijo backtracking. Only steps that
/// decrease f are taken, so f(result.x) <= f(x0).
BfgsResult bfgs_minimize(const std::function<double(const RVector&)>& f, RVector x0,
                         const BfgsOptions& opts = {});

}  // namespace risrsma
