#include "cap/linfit.hpp"

#include <Eigen/QR>

namespace cap {

namespace {

constexpr double kRankThreshold = 1e-10;

Matrix gather_rows(const Matrix& x, std::span<const int> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(rows[r]);
  return out;
}

Vector gather(const Vector& y, std::span<const int> rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out[static_cast<Eigen::Index>(r)] = y[rows[r]];
  return out;
}

Matrix with_intercept(const Matrix& x) {
  Matrix a(x.rows(), x.cols() + 1);
  a.col(0).setOnes();
  a.rightCols(x.cols()) = x;
  return a;
}

}  // namespace

FitResult fit_ls(const Matrix& x, const Vector& y) {
  if (x.rows() == 0) throw std::invalid_argument("fit_ls: empty subset");
  if (x.rows() != y.size()) throw std::invalid_argument("fit_ls: row/response mismatch");

  const Matrix a = with_intercept(x);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(kRankThreshold);
  cod.compute(a);

  FitResult out;
  const Vector coef = cod.solve(y);
  out.hyperplane.alpha = coef[0];
  out.hyperplane.beta = coef.tail(x.cols());
  out.rank_deficient = cod.rank() < a.cols();
  out.sse = (y - a * coef).squaredNorm();
  return out;
}

FitResult fit_ls(const Dataset& data, std::span<const int> rows) {
  return fit_ls(gather_rows(data.x, rows), gather(data.y, rows));
}

Vector leverage(const Matrix& x) {
  const Eigen::Index m = x.rows();
  const Eigen::Index cols = x.cols() + 1;
  if (m < cols) throw std::invalid_argument("leverage: fewer rows than design columns");

  const Matrix a = with_intercept(x);
  Eigen::ColPivHouseholderQR<Matrix> qr;
  qr.setThreshold(kRankThreshold);
  qr.compute(a);
  if (qr.rank() < cols)
    throw std::invalid_argument("leverage: design is rank deficient");

  // H_ii is the squared row norm of the thin Q factor.
  Matrix thin_q = qr.householderQ() * Matrix::Identity(m, cols);
  return thin_q.rowwise().squaredNorm();
}

Vector leverage(const Dataset& data, std::span<const int> rows) {
  return leverage(gather_rows(data.x, rows));
}

Vector solve_least_squares(const Matrix& a, const Vector& b, bool* rank_deficient) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(kRankThreshold);
  cod.compute(a);
  if (rank_deficient) *rank_deficient = cod.rank() < a.cols();
  return cod.solve(b);
}

}  // namespace cap
