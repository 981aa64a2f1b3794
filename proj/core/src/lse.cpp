#include "cap/lse.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cap/linfit.hpp"

namespace cap {

namespace {

using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using ColSparse = Eigen::SparseMatrix<double>;

/// Constraint rows yhat_i - yhat_j + g_i . (x_j - x_i) <= 0 over ordered
/// pairs, i-major. Variables are [yhat(n); g_1(p); ...; g_n(p)].
RowSparse build_constraints(const Dataset& data) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const Eigen::Index rows = n * (n - 1);
  RowSparse a(rows, n * (1 + p));
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(rows * (p + 2)));
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      trip.emplace_back(r, i, 1.0);
      trip.emplace_back(r, j, -1.0);
      for (Eigen::Index c = 0; c < p; ++c)
        trip.emplace_back(r, n + i * p + c, data.x(j, c) - data.x(i, c));
      ++r;
    }
  }
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

LseFit extract(const Vector& z, const Dataset& data) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  LseFit fit;
  fit.fitted = z.head(n);
  fit.subgradients.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    fit.subgradients.row(i) = z.segment(n + i * p, p).transpose();
  fit.objective = (fit.fitted - data.y).squaredNorm();
  double violation = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double lhs = fit.fitted[i] +
                         fit.subgradients.row(i).dot(data.x.row(j) - data.x.row(i)) -
                         fit.fitted[j];
      violation = std::max(violation, lhs);
    }
  }
  fit.max_violation = std::max(0.0, violation);
  return fit;
}

double step_limit(const Vector& v, const Vector& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  return alpha;
}

}  // namespace

LseFit lse_fit(const Dataset& data, const LseOptions& options) {
  data.validate();
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (n > options.max_n)
    throw std::invalid_argument("lse_fit: n=" + std::to_string(n) +
                                " exceeds the desk-scale cap of " +
                                std::to_string(options.max_n));

  if (n == 1) {
    LseFit fit;
    fit.fitted = data.y;
    fit.subgradients = Matrix::Zero(1, p);
    fit.converged = true;
    return fit;
  }

  const Eigen::Index dim = n * (1 + p);
  const RowSparse a = build_constraints(data);
  const ColSparse at = a.transpose();
  const Eigen::Index rows = a.rows();

  Vector q = Vector::Zero(dim);
  q.head(n) = -2.0 * data.y;
  Vector p_diag = Vector::Zero(dim);
  p_diag.head(n).setConstant(2.0);
  const double q_norm = q.lpNorm<Eigen::Infinity>();

  // Primal-dual interior point (Mehrotra predictor-corrector) on
  //   min 1/2 z'Pz + q'z  s.t.  Az + s = 0, s >= 0, duals lam >= 0.
  // Warm start from the global least-squares plane (every constraint tight).
  Vector z(dim);
  {
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    const FitResult base = fit_ls(data, all);
    z.head(n) = (data.x * base.hyperplane.beta).array() + base.hyperplane.alpha;
    for (Eigen::Index i = 0; i < n; ++i) z.segment(n + i * p, p) = base.hyperplane.beta;
  }
  Vector s = Vector::Ones(rows);
  Vector lam = Vector::Ones(rows);

  Matrix kkt(dim, dim);
  Eigen::LLT<Matrix> llt;
  double last_obj = (z.head(n) - data.y).squaredNorm();

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const Vector az = a * z;
    const Vector aty = at * lam;
    const Vector r_d = p_diag.cwiseProduct(z) + q + aty;
    const Vector r_p = az + s;
    const double mu = s.dot(lam) / static_cast<double>(rows);
    const double obj = (z.head(n) - data.y).squaredNorm();
    const double violation = std::max(0.0, az.maxCoeff());
    const double dual_scale = std::max(
        {1.0, q_norm, p_diag.cwiseProduct(z).lpNorm<Eigen::Infinity>(),
         aty.lpNorm<Eigen::Infinity>()});
    const bool stalled =
        mu <= options.stall_tol * (1.0 + obj) ||
        std::abs(obj - last_obj) <= options.stall_tol * (1.0 + obj);
    last_obj = obj;

    if (violation <= options.tol &&
        r_d.lpNorm<Eigen::Infinity>() <= options.tol * dual_scale && stalled) {
      LseFit fit = extract(z, data);
      fit.iterations = iter - 1;
      fit.converged = true;
      return fit;
    }

    // Normal matrix P + A' diag(lam/s) A, built row by row.
    const Vector d = lam.cwiseQuotient(s);
    kkt.setZero();
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (RowSparse::InnerIterator it1(a, r); it1; ++it1)
        for (RowSparse::InnerIterator it2(a, r); it2; ++it2)
          kkt(it1.col(), it2.col()) += d[r] * it1.value() * it2.value();
    }
    kkt.diagonal() += p_diag;

    double reg = 1e-11;
    kkt.diagonal().array() += reg;
    llt.compute(kkt);
    while (llt.info() != Eigen::Success && reg < 1.0) {
      const double bump = reg * 99.0;
      kkt.diagonal().array() += bump;
      reg += bump;
      llt.compute(kkt);
    }

    auto solve_direction = [&](const Vector& r_c) {
      const Vector rhs = -r_d + at * ((r_c - lam.cwiseProduct(r_p)).cwiseQuotient(s));
      Vector dz = llt.solve(rhs);
      Vector ds = -r_p - a * dz;
      Vector dlam = (-r_c - lam.cwiseProduct(ds)).cwiseQuotient(s);
      return std::tuple<Vector, Vector, Vector>{std::move(dz), std::move(ds), std::move(dlam)};
    };

    // predictor
    const Vector r_c_aff = s.cwiseProduct(lam);
    const auto [dz_aff, ds_aff, dlam_aff] = solve_direction(r_c_aff);
    const double ap_aff = step_limit(s, ds_aff);
    const double ad_aff = step_limit(lam, dlam_aff);
    const double mu_aff = (s + ap_aff * ds_aff).dot(lam + ad_aff * dlam_aff) /
                          static_cast<double>(rows);
    const double sigma = std::pow(std::max(mu_aff, 0.0) / std::max(mu, 1e-300), 3.0);

    // corrector
    const Vector r_c = s.cwiseProduct(lam) + ds_aff.cwiseProduct(dlam_aff) -
                       Vector::Constant(rows, sigma * mu);
    const auto [dz, ds, dlam] = solve_direction(r_c);
    const double ap = std::min(1.0, 0.99 * step_limit(s, ds));
    const double ad = std::min(1.0, 0.99 * step_limit(lam, dlam));

    z += ap * dz;
    s += ap * ds;
    lam += ad * dlam;
  }

  LseFit best = extract(z, data);
  best.iterations = options.max_iter;
  best.converged = false;
  throw lse_nonconvergence(
      "lse_fit: no convergence in " + std::to_string(options.max_iter) +
          " iterations (violation=" + std::to_string(best.max_violation) + ")",
      std::move(best));
}

double lse_predict(const LseFit& fit, const Dataset& data, const Eigen::Ref<const Vector>& x) {
  if (x.size() != data.p())
    throw std::invalid_argument("lse_predict: covariate length mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double v = fit.fitted[i] + fit.subgradients.row(i).dot(x.transpose() - data.x.row(i));
    best = std::max(best, v);
  }
  return best;
}

}  // namespace cap
