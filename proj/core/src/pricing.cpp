#include "cap/pricing.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "cap/engine.hpp"
#include "cap/linfit.hpp"
#include "cap/parallel.hpp"
#include "cap/rng.hpp"

namespace cap {

namespace {

/// Lower-triangular factor of the equicorrelation matrix; rank one when
/// rho = 1, where Cholesky proper breaks down.
Matrix correlation_factor(int assets, double rho) {
  if (assets == 1) return Matrix::Ones(1, 1);
  if (rho == 1.0) {
    Matrix l = Matrix::Zero(assets, assets);
    l.col(0).setOnes();
    return l;
  }
  Matrix corr = Matrix::Constant(assets, assets, rho);
  corr.diagonal().setOnes();
  Eigen::LLT<Matrix> llt(corr);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("correlation matrix is not positive definite");
  return llt.matrixL();
}

Matrix poly_features(const Matrix& states, double strike) {
  const Eigen::Index m = states.rows();
  const Eigen::Index n_assets = states.cols();
  const Eigen::Index cross = n_assets * (n_assets - 1) / 2;
  Matrix f(m, 2 + 3 * n_assets + cross);
  for (Eigen::Index r = 0; r < m; ++r) {
    Eigen::Index c = 0;
    f(r, c++) = 1.0;
    for (Eigen::Index i = 0; i < n_assets; ++i) f(r, c++) = states(r, i);
    for (Eigen::Index i = 0; i < n_assets; ++i) f(r, c++) = states(r, i) * states(r, i);
    for (Eigen::Index i = 0; i < n_assets; ++i)
      f(r, c++) = states(r, i) * states(r, i) * states(r, i);
    for (Eigen::Index i = 0; i < n_assets; ++i)
      for (Eigen::Index j = i + 1; j < n_assets; ++j) f(r, c++) = states(r, i) * states(r, j);
    f(r, c++) = basket_payoff(states.row(r).transpose(), strike);
  }
  return f;
}

}  // namespace

void OptionSpec::validate() const {
  if (assets < 1) throw std::invalid_argument("asset count must be at least 1");
  if (!(spot > 0.0)) throw std::invalid_argument("spot must be positive");
  if (!(strike > 0.0)) throw std::invalid_argument("strike must be positive");
  if (!(maturity > 0.0)) throw std::invalid_argument("maturity must be positive");
  if (volatility < 0.0) throw std::invalid_argument("volatility must be nonnegative");
  if (exercise_steps < 1) throw std::invalid_argument("need at least one exercise step");
  const double lower = assets > 1 ? -1.0 / (assets - 1) : -1.0;
  if (!(correlation > lower) || correlation > 1.0)
    throw std::invalid_argument("correlation must lie in (-1/(N-1), 1]");
}

RegressorKind regressor_from_string(const std::string& name) {
  if (name == "cap") return RegressorKind::cap;
  if (name == "fastcap" || name == "fast_cap") return RegressorKind::fast_cap;
  if (name == "polyls" || name == "poly_ls" || name == "ls") return RegressorKind::poly_ls;
  throw std::invalid_argument("unknown regressor '" + name + "' (expected cap, fastcap or polyls)");
}

const char* to_string(RegressorKind kind) {
  switch (kind) {
    case RegressorKind::cap: return "cap";
    case RegressorKind::fast_cap: return "fast_cap";
    case RegressorKind::poly_ls: return "poly_ls";
  }
  return "?";
}

double PolyFit::predict(const Eigen::Ref<const Vector>& state) const {
  const Eigen::Index n_assets = assets;
  double acc = coef[0];
  Eigen::Index c = 1;
  for (Eigen::Index i = 0; i < n_assets; ++i) acc += coef[c++] * state[i];
  for (Eigen::Index i = 0; i < n_assets; ++i) acc += coef[c++] * state[i] * state[i];
  for (Eigen::Index i = 0; i < n_assets; ++i) acc += coef[c++] * state[i] * state[i] * state[i];
  for (Eigen::Index i = 0; i < n_assets; ++i)
    for (Eigen::Index j = i + 1; j < n_assets; ++j) acc += coef[c++] * state[i] * state[j];
  acc += coef[c] * basket_payoff(state, strike);
  return acc;
}

double ValuePolicy::continuation_at(int t, const Eigen::Ref<const Vector>& state) const {
  const auto& model = continuation.at(static_cast<std::size_t>(t - 1));
  if (std::holds_alternative<PartitionModel>(model))
    return std::get<PartitionModel>(model).evaluate(state);
  return std::get<PolyFit>(model).predict(state);
}

PathSet simulate_paths(const OptionSpec& spec, Eigen::Index m, std::uint64_t seed, int threads) {
  spec.validate();
  if (m < 1) throw std::invalid_argument("need at least one path");

  const int steps = spec.exercise_steps;
  const int n_assets = spec.assets;
  const Matrix chol = correlation_factor(n_assets, spec.correlation);
  const double dt = spec.dt();
  const double drift_term = (spec.drift - 0.5 * spec.volatility * spec.volatility) * dt;
  const double vol_term = spec.volatility * std::sqrt(dt);

  PathSet out;
  out.seed = seed;
  out.states.assign(static_cast<std::size_t>(steps), Matrix(m, n_assets));

  parallel_for(m, threads, [&](std::int64_t begin, std::int64_t end) {
    Vector shocks(n_assets);
    Vector log_price(n_assets);
    for (std::int64_t j = begin; j < end; ++j) {
      RandomStream stream(seed, static_cast<std::uint64_t>(j));
      log_price.setConstant(std::log(spec.spot));
      for (int t = 0; t < steps; ++t) {
        for (int k = 0; k < n_assets; ++k) shocks[k] = stream.normal();
        log_price += Vector::Constant(n_assets, drift_term) + vol_term * (chol * shocks);
        out.states[static_cast<std::size_t>(t)].row(j) = log_price.array().exp();
      }
    }
  });
  return out;
}

double basket_payoff(const Eigen::Ref<const Vector>& prices, double strike) {
  return std::max(prices.mean() - strike, 0.0);
}

ValuePolicy backward_induct(const PathSet& paths, const OptionSpec& spec, RegressorKind kind,
                            const CapConfig& regressor_cfg) {
  spec.validate();
  if (paths.steps() != spec.exercise_steps || paths.assets() != spec.assets)
    throw std::invalid_argument("path set does not match the option spec");
  const Eigen::Index m = paths.paths();
  const int steps = spec.exercise_steps;
  const double discount = std::exp(-spec.rate * spec.dt());

  ValuePolicy policy;
  policy.kind = kind;
  policy.continuation.resize(static_cast<std::size_t>(std::max(0, steps - 1)));

  Vector value(m);
  const Matrix& terminal = paths.states.back();
  for (Eigen::Index j = 0; j < m; ++j)
    value[j] = basket_payoff(terminal.row(j).transpose(), spec.strike);

  for (int t = steps - 1; t >= 1; --t) {
    const Matrix& states = paths.states[static_cast<std::size_t>(t - 1)];
    const Vector target = discount * value;

    ContinuationModel fitted;
    try {
      if (kind == RegressorKind::poly_ls) {
        PolyFit poly;
        poly.assets = spec.assets;
        poly.strike = spec.strike;
        poly.coef = solve_least_squares(poly_features(states, spec.strike), target);
        fitted = std::move(poly);
      } else {
        Dataset step_data{states, target};
        CapConfig cfg = regressor_cfg;
        cfg.orientation = Orientation::convex;
        cfg.seed = derive_seed(regressor_cfg.seed, static_cast<std::uint64_t>(t));
        if (kind == RegressorKind::fast_cap) {
          cfg.strategy = CapConfig::Strategy::random_projection;
          if (cfg.directions <= 0) cfg.directions = std::min(spec.assets, 10);
          fitted = run_fast_cap(step_data, cfg).best();
        } else {
          cfg.strategy = CapConfig::Strategy::cardinal;
          fitted = run_cap(step_data, cfg).best();
        }
      }
    } catch (const std::exception& e) {
      throw numerical_error("continuation regression failed at step t=" + std::to_string(t) +
                            ": " + e.what());
    }

    // Tsitsiklis-Van Roy recursion: value = max(payoff, continuation) at the
    // sampled states.
    for (Eigen::Index j = 0; j < m; ++j) {
      const Vector state = states.row(j).transpose();
      const double h = basket_payoff(state, spec.strike);
      const double c = std::holds_alternative<PartitionModel>(fitted)
                           ? std::get<PartitionModel>(fitted).evaluate(state)
                           : std::get<PolyFit>(fitted).predict(state);
      value[j] = std::max(h, c);
    }
    policy.continuation[static_cast<std::size_t>(t - 1)] = std::move(fitted);
  }
  return policy;
}

PolicyValue evaluate_policy(const ValuePolicy& policy, const PathSet& fresh_paths,
                            const OptionSpec& spec, int threads) {
  spec.validate();
  if (fresh_paths.steps() != spec.exercise_steps || fresh_paths.assets() != spec.assets)
    throw std::invalid_argument("path set does not match the option spec");
  if (static_cast<int>(policy.continuation.size()) != spec.exercise_steps - 1)
    throw std::invalid_argument("policy does not match the exercise grid");

  const Eigen::Index m = fresh_paths.paths();
  const int steps = spec.exercise_steps;
  const double dt = spec.dt();

  Vector discounted(m);
  parallel_for(m, threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t j = begin; j < end; ++j) {
      double payoff = 0.0;
      double when = spec.maturity;
      bool exercised = false;
      for (int t = 1; t < steps && !exercised; ++t) {
        const Vector state =
            fresh_paths.states[static_cast<std::size_t>(t - 1)].row(j).transpose();
        const double h = basket_payoff(state, spec.strike);
        if (h >= policy.continuation_at(t, state)) {
          payoff = h;
          when = t * dt;
          exercised = true;
        }
      }
      if (!exercised) {
        payoff = basket_payoff(fresh_paths.states.back().row(j).transpose(), spec.strike);
        when = spec.maturity;
      }
      discounted[j] = std::exp(-spec.rate * when) * payoff;
    }
  });

  PolicyValue out;
  out.value = discounted.mean();
  const double var = (discounted.array() - out.value).square().sum() /
                     std::max<double>(1.0, static_cast<double>(m - 1));
  out.std_error = std::sqrt(var / static_cast<double>(m));
  return out;
}

PolicyValue european_value(const PathSet& paths, const OptionSpec& spec) {
  const Eigen::Index m = paths.paths();
  Vector discounted(m);
  const double factor = std::exp(-spec.rate * spec.maturity);
  for (Eigen::Index j = 0; j < m; ++j)
    discounted[j] = factor * basket_payoff(paths.states.back().row(j).transpose(), spec.strike);
  PolicyValue out;
  out.value = discounted.mean();
  const double var = (discounted.array() - out.value).square().sum() /
                     std::max<double>(1.0, static_cast<double>(m - 1));
  out.std_error = std::sqrt(var / static_cast<double>(m));
  return out;
}

}  // namespace cap
