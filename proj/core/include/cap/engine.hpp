#pragma once

#include <cstdint>
#include <vector>

#include "cap/linfit.hpp"
#include "cap/types.hpp"

namespace cap {

/// One proposed dyadic split of subset k along a direction (a cardinal
/// dimension, or a projection vector for the randomized variant). Holds the
/// refit child pieces plus both selection scores; apply() materializes the
/// resulting model.
struct CandidateSplit {
  int subset_index = 0;
  int direction_index = 0;
  Vector projection;  // empty for cardinal splits
  int knot_index = 0;  // 1..L for knot splits, L+1 for the median fallback
  double threshold = 0.0;
  Hyperplane left_plane, right_plane;
  std::vector<int> left_rows, right_rows;
  double train_mse = 0.0;  // global MSE of the resulting max-affine model
  double split_sse = 0.0;  // summed SSE of the two child fits (local objective)

  PartitionModel apply(const PartitionModel& parent) const;
};

/// Evenly spaced split proportions l/(L+1), strictly inside (0,1).
std::vector<double> knots(int count);

/// P' independent standard normal p-vectors; deterministic given the seed.
std::vector<Vector> random_directions(int count, Eigen::Index p, std::uint64_t seed);

/// Mean squared residual of the max-affine (min-affine) evaluation over all
/// observations.
double global_mse(const PartitionModel& model, const Dataset& data);

/// All feasible candidate splits of the current model. Subsets with fewer
/// than 2 n_min observations propose nothing; knot splits that leave a child
/// below n_min are discarded; a subset/direction pair whose knots all fail
/// falls back to one median split when that split is itself feasible. The
/// `draw` counter varies the random projections between iterations.
std::vector<CandidateSplit> generate_candidates(const PartitionModel& model, const Dataset& data,
                                                const CapConfig& cfg, std::uint64_t draw = 0);

/// Candidate minimizing the configured objective; ties resolve to the
/// earliest candidate in (subset, direction, knot) order. Throws on an empty
/// list.
const CandidateSplit& select_split(const std::vector<CandidateSplit>& candidates,
                                   CapConfig::SplitObjective objective);

/// One pass of hyperplane-induced refitting. Returns the refit model only
/// when every induced subset keeps at least n_min observations; otherwise
/// the input comes back unchanged.
PartitionModel refit(const PartitionModel& model, const Dataset& data, int n_min);

/// Full fitting path: M_1 is a single least-squares plane, then repeated
/// split/refit until no subset can be divided. GCV is scored for every
/// recorded model and picks the final one.
ModelSequence run_cap(const Dataset& data, const CapConfig& cfg);

/// Randomized variant: candidate directions are fresh Gaussian projections
/// each iteration and fitting additionally stops once GCV has increased in
/// two consecutive iterations.
ModelSequence run_fast_cap(const Dataset& data, const CapConfig& cfg);

}  // namespace cap
