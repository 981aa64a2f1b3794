#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cap/linfit.hpp>
#include <numeric>

#include "test_util.hpp"

using namespace cap;

TEST_CASE("fit_ls: exact line through two points") {
  Matrix x(2, 1);
  x << 0.0, 1.0;
  Vector y(2);
  y << 1.0, 3.0;
  const FitResult f = fit_ls(x, y);
  CHECK(f.hyperplane.alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.hyperplane.beta[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.sse <= 1e-24);
  CHECK_FALSE(f.rank_deficient);
}

TEST_CASE("fit_ls: hand-solved normal equations") {
  // (0,0),(1,1),(2,1): X'X = [3 3; 3 5], X'y = (2,3) -> alpha=1/6, beta=1/2.
  Matrix x(3, 1);
  x << 0.0, 1.0, 2.0;
  Vector y(3);
  y << 0.0, 1.0, 1.0;
  const FitResult f = fit_ls(x, y);
  CHECK(f.hyperplane.alpha == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(f.hyperplane.beta[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.sse == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("fit_ls: constant second covariate is rank deficient but predicts like the 1-D fit") {
  RandomStream rs(17);
  const Eigen::Index n = 30;
  Matrix x2(n, 2);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x2(i, 0) = rs.normal();
    x2(i, 1) = 4.0;  // constant: collinear with the intercept
    y[i] = 1.5 * x2(i, 0) - 0.3 + 0.1 * rs.normal();
  }
  const FitResult wide = fit_ls(x2, y);
  CHECK(wide.rank_deficient);

  const FitResult narrow = fit_ls(x2.col(0), y);
  CHECK_FALSE(narrow.rank_deficient);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pw = wide.hyperplane.value_at(x2.row(i).transpose());
    const double pn = narrow.hyperplane.value_at(x2.row(i).head(1).transpose());
    CHECK(pw == doctest::Approx(pn).epsilon(1e-10));
  }
}

TEST_CASE("fit_ls: empty subset is rejected") {
  const Dataset d = test_util::random_dataset(5, 2, 1);
  CHECK_THROWS_AS(fit_ls(d, std::span<const int>{}), std::invalid_argument);
}

TEST_CASE("fit_ls: residual orthogonality and affine recovery") {
  const Eigen::Index n = 60, p = 4;
  RandomStream rs(23);
  Matrix x(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rs.normal();

  SUBCASE("residuals orthogonal to the design") {
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = rs.normal();
    const FitResult f = fit_ls(x, y);
    Vector r = y - ((x * f.hyperplane.beta).array() + f.hyperplane.alpha).matrix();
    const double scale = y.norm();
    CHECK(std::abs(r.sum()) <= 1e-8 * scale);
    CHECK((x.transpose() * r).lpNorm<Eigen::Infinity>() <= 1e-8 * scale);
  }

  SUBCASE("exact affine data is recovered") {
    Vector beta(p);
    beta << 2.0, -1.0, 0.5, 3.0;
    const double alpha = -0.7;
    Vector y = ((x * beta).array() + alpha).matrix();
    const FitResult f = fit_ls(x, y);
    CHECK(std::abs(f.hyperplane.alpha - alpha) <= 1e-10 * std::abs(alpha));
    for (Eigen::Index j = 0; j < p; ++j)
      CHECK(std::abs(f.hyperplane.beta[j] - beta[j]) <= 1e-10 * std::abs(beta[j]));
  }
}

TEST_CASE("leverage: trace identity on random full-rank designs") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Eigen::Index n = 25, p = 3;
    RandomStream rs(seed);
    Matrix x(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rs.normal();
    const Vector h = leverage(x);
    CHECK(h.sum() == doctest::Approx(static_cast<double>(p + 1)).epsilon(1e-10));
    CHECK(h.minCoeff() >= 1.0 / static_cast<double>(n) - 1e-12);
    CHECK(h.maxCoeff() <= 1.0 + 1e-12);
  }
}

TEST_CASE("leverage: symmetric three-point design") {
  // Hat diagonal of [1 x] at {-1,0,1} is 1/3 + x^2/2 = {5/6, 1/3, 5/6}
  // (sums to p+1 = 2).
  Matrix x(3, 1);
  x << -1.0, 0.0, 1.0;
  const Vector h = leverage(x);
  CHECK(h[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(h[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(h[2] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("leverage: rank-deficient design is rejected") {
  Matrix x(4, 2);
  x << 1.0, 2.0, 2.0, 4.0, 3.0, 6.0, 4.0, 8.0;  // second column is 2x the first
  CHECK_THROWS_AS(leverage(x), std::invalid_argument);
}

TEST_CASE("leverage: exact leave-one-out identity against refits") {
  const Eigen::Index n = 15, p = 2;
  RandomStream rs(41);
  Matrix x(n, p);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rs.normal();
    y[i] = 1.0 + x(i, 0) - 2.0 * x(i, 1) + rs.normal();
  }
  const FitResult full = fit_ls(x, y);
  const Vector h = leverage(x);

  for (Eigen::Index drop = 0; drop < n; ++drop) {
    Matrix xr(n - 1, p);
    Vector yr(n - 1);
    Eigen::Index w = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == drop) continue;
      xr.row(w) = x.row(i);
      yr[w] = y[i];
      ++w;
    }
    const FitResult loo = fit_ls(xr, yr);
    const double loo_residual = y[drop] - loo.hyperplane.value_at(x.row(drop).transpose());
    const double fitted = full.hyperplane.value_at(x.row(drop).transpose());
    const double shortcut = (y[drop] - fitted) / (1.0 - h[drop]);
    CHECK(shortcut == doctest::Approx(loo_residual).epsilon(1e-8));
  }
}

TEST_CASE("solve_least_squares: minimum-norm flag on collinear columns") {
  Matrix a(4, 2);
  a << 1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0;
  Vector b = Vector::Ones(4);
  bool deficient = false;
  const Vector sol = solve_least_squares(a, b, &deficient);
  CHECK(deficient);
  CHECK((a * sol - b).norm() <= 1e-10);
}
