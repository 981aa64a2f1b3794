#pragma once

#include <span>
#include <vector>

#include "cap/types.hpp"

namespace cap {

/// Generalized cross-validation scores along a model sequence, with the
/// chosen model and the per-observation piece assignments it used.
struct GcvReport {
  std::vector<double> scores;
  int selected = 0;
  std::vector<int> assigned;  // k(i) for the selected model
};

/// GCV score of one partition model: each residual is taken against the
/// inflation-adjusted dominant piece k(i) and inflated by
/// 1/(1 - (p+1)/|C_k(i)|) when i belongs to that piece. Concave models are
/// scored through the negation transform. Throws std::invalid_argument when
/// any subset has at most p+1 observations.
double gcv_score(const PartitionModel& model, const Dataset& data);

/// As gcv_score, also reporting k(i) per observation.
double gcv_score(const PartitionModel& model, const Dataset& data, std::vector<int>& assigned);

/// Index of the minimal score; near-ties (1e-12 absolute-relative) resolve to
/// the smaller model.
int select_min_score(std::span<const double> scores);

/// Index of the GCV-minimal model in the sequence. Uses the scores recorded
/// in the sequence when present, otherwise recomputes them.
int select_model(const ModelSequence& seq, const Dataset& data);

GcvReport gcv_report(const ModelSequence& seq, const Dataset& data);

}  // namespace cap
