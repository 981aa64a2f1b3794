#pragma once

#include "cap/types.hpp"

namespace cap {

/// Solution of the shape-constrained least squares problem
///   min sum_i (y_i - yhat_i)^2
///   s.t. yhat_j >= yhat_i + g_i . (x_j - x_i)   for all i != j,
/// the classical convex regression estimator. Evaluation takes the maximum
/// over the n supporting hyperplanes.
struct LseFit {
  Vector fitted;        // yhat, length n
  Matrix subgradients;  // n x p, row i is g_i
  double objective = 0.0;
  double max_violation = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct LseOptions {
  double tol = 1e-6;        // constraint violation and KKT residual target
  double stall_tol = 1e-8;  // relative objective stall between checks
  int max_iter = 200;  // interior-point iterations
  int max_n = 300;  // desk-scale guard: the QP has n(n-1) constraints
};

/// Raised when the solver hits max_iter; carries the best iterate found.
struct lse_nonconvergence : numerical_error {
  lse_nonconvergence(const std::string& what, LseFit best_fit)
      : numerical_error(what), best(std::move(best_fit)) {}
  LseFit best;
};

/// Solves the quadratic program with a primal-dual interior-point iteration
/// over the n(n-1) supporting-hyperplane constraints, warm-started from the
/// global least-squares plane. Deterministic given the data.
LseFit lse_fit(const Dataset& data, const LseOptions& options = {});

/// max_i yhat_i + g_i . (x - x_i) over the training points.
double lse_predict(const LseFit& fit, const Dataset& data, const Eigen::Ref<const Vector>& x);

}  // namespace cap
