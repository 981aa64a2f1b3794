#include "cap/gcv.hpp"

#include <cmath>
#include <limits>

namespace cap {

namespace {

double score_convex(const PartitionModel& model, const Dataset& data, std::vector<int>* assigned) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const int k_count = model.pieces();

  std::vector<int> member(static_cast<std::size_t>(n), -1);
  std::vector<double> shrink(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) {
    const auto& subset = model.subsets[static_cast<std::size_t>(k)];
    const auto size = static_cast<Eigen::Index>(subset.size());
    if (size <= p + 1)
      throw std::invalid_argument("gcv undefined: subset " + std::to_string(k + 1) + " has " +
                                  std::to_string(size) + " <= p+1 observations");
    shrink[static_cast<std::size_t>(k)] =
        1.0 - static_cast<double>(p + 1) / static_cast<double>(size);
    for (int idx : subset) member[static_cast<std::size_t>(idx)] = k;
  }

  Matrix vals(n, k_count);
  for (int k = 0; k < k_count; ++k)
    vals.col(k) = (data.x * model.hyperplanes[static_cast<std::size_t>(k)].beta).array() +
                  model.hyperplanes[static_cast<std::size_t>(k)].alpha;

  if (assigned) assigned->assign(static_cast<std::size_t>(n), 0);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int home = member[static_cast<std::size_t>(i)];
    int arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_count; ++k) {
      double v = vals(i, k);
      if (k == home) v /= shrink[static_cast<std::size_t>(k)];
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    const double denom = arg == home ? shrink[static_cast<std::size_t>(arg)] : 1.0;
    const double r = (data.y[i] - vals(i, arg)) / denom;
    acc += r * r;
    if (assigned) (*assigned)[static_cast<std::size_t>(i)] = arg;
  }
  return acc / static_cast<double>(n);
}

}  // namespace

double gcv_score(const PartitionModel& model, const Dataset& data) {
  std::vector<int>* none = nullptr;
  if (model.orientation == Orientation::concave)
    return score_convex(negated(model), Dataset{data.x, -data.y}, none);
  return score_convex(model, data, none);
}

double gcv_score(const PartitionModel& model, const Dataset& data, std::vector<int>& assigned) {
  if (model.orientation == Orientation::concave)
    return score_convex(negated(model), Dataset{data.x, -data.y}, &assigned);
  return score_convex(model, data, &assigned);
}

int select_min_score(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("empty score sequence");
  double best = std::numeric_limits<double>::infinity();
  for (double s : scores)
    if (s < best) best = s;
  if (!std::isfinite(best)) return 0;
  // Scores of an exact fit are float noise around zero; a hair of tolerance
  // lets the parsimony tie-break see them as equal.
  const double tol = 1e-12 * (1.0 + std::abs(best));
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] <= best + tol) return static_cast<int>(i);
  return 0;
}

int select_model(const ModelSequence& seq, const Dataset& data) {
  if (seq.models.empty()) throw std::invalid_argument("empty model sequence");
  if (seq.gcv.size() == seq.models.size()) return select_min_score(seq.gcv);
  std::vector<double> scores;
  scores.reserve(seq.models.size());
  for (const auto& model : seq.models) scores.push_back(gcv_score(model, data));
  return select_min_score(scores);
}

GcvReport gcv_report(const ModelSequence& seq, const Dataset& data) {
  GcvReport report;
  report.scores.reserve(seq.models.size());
  for (const auto& model : seq.models) report.scores.push_back(gcv_score(model, data));
  report.selected = select_min_score(report.scores);
  gcv_score(seq.models[static_cast<std::size_t>(report.selected)], data, report.assigned);
  return report;
}

}  // namespace cap
