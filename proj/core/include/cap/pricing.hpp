#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cap/types.hpp"

namespace cap {

/// American basket option on the average of N correlated assets.
struct OptionSpec {
  int assets = 1;            // N
  double spot = 100.0;       // starting price per asset
  double strike = 110.0;
  double maturity = 0.25;    // years
  double drift = 0.05;       // GBM drift mu
  double volatility = 0.10;  // sigma
  double correlation = 0.5;  // pairwise rho
  double rate = 0.05;        // discount rate
  int exercise_steps = 50;   // exercise dates after t=0

  double dt() const { return maturity / exercise_steps; }
  void validate() const;
};

/// Simulated price paths: states[t-1] is the M x N matrix of asset prices at
/// exercise date t = 1..steps.
struct PathSet {
  std::vector<Matrix> states;
  std::uint64_t seed = 0;

  Eigen::Index paths() const { return states.empty() ? 0 : states.front().rows(); }
  int steps() const { return static_cast<int>(states.size()); }
  Eigen::Index assets() const { return states.empty() ? 0 : states.front().cols(); }
};

enum class RegressorKind { cap, fast_cap, poly_ls };

RegressorKind regressor_from_string(const std::string& name);
const char* to_string(RegressorKind kind);

/// Least squares on the polynomial basis (1, S_i, S_i^2, S_i^3, S_i S_j for
/// i<j, payoff).
struct PolyFit {
  Vector coef;
  int assets = 0;
  double strike = 0.0;

  double predict(const Eigen::Ref<const Vector>& state) const;
};

using ContinuationModel = std::variant<PartitionModel, PolyFit>;

/// Per-timestep continuation-value regressors for t = 1..steps-1.
struct ValuePolicy {
  RegressorKind kind = RegressorKind::cap;
  std::vector<ContinuationModel> continuation;

  double continuation_at(int t, const Eigen::Ref<const Vector>& state) const;
};

struct PolicyValue {
  double value = 0.0;
  double std_error = 0.0;
};

/// Exact-discretization correlated GBM paths; deterministic given the seed,
/// with one independent substream per path.
PathSet simulate_paths(const OptionSpec& spec, Eigen::Index m, std::uint64_t seed,
                       int threads = 0);

/// max(average price - strike, 0).
double basket_payoff(const Eigen::Ref<const Vector>& prices, double strike);

/// Backward induction over the exercise dates: the terminal value is the
/// payoff, and each earlier step regresses the discounted next-step value on
/// the current state with the chosen regressor, then takes the max of payoff
/// and continuation.
ValuePolicy backward_induct(const PathSet& paths, const OptionSpec& spec, RegressorKind kind,
                            const CapConfig& regressor_cfg = {});

/// Lower-bound policy value on fresh paths: each path exercises at the first
/// date where the payoff is at least the estimated continuation value.
PolicyValue evaluate_policy(const ValuePolicy& policy, const PathSet& fresh_paths,
                            const OptionSpec& spec, int threads = 0);

/// Discounted mean terminal payoff on the same paths; the no-early-exercise
/// comparator.
PolicyValue european_value(const PathSet& paths, const OptionSpec& spec);

}  // namespace cap
