#pragma once

#include <span>

#include "cap/types.hpp"

namespace cap {

struct FitResult {
  Hyperplane hyperplane;
  double sse = 0.0;
  bool rank_deficient = false;
};

/// Ordinary least squares on the intercept-augmented design [1 X]. Solved by
/// complete orthogonal decomposition; a rank-deficient design yields the
/// minimum-norm solution with rank_deficient set. Rank cutoff is 1e-10
/// relative to the largest factor diagonal.
FitResult fit_ls(const Matrix& x, const Vector& y);

/// Same fit restricted to the given rows of a dataset.
FitResult fit_ls(const Dataset& data, std::span<const int> rows);

/// Diagonal of the hat matrix X (X^T X)^-1 X^T for the intercept-augmented
/// design. Throws std::invalid_argument on a rank-deficient design.
Vector leverage(const Matrix& x);
Vector leverage(const Dataset& data, std::span<const int> rows);

/// Minimum-norm least squares for an arbitrary design matrix (no implicit
/// intercept column).
Vector solve_least_squares(const Matrix& a, const Vector& b, bool* rank_deficient = nullptr);

}  // namespace cap
