#include "cap/types.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace cap {

void Dataset::validate() const {
  if (x.rows() < 1) throw std::invalid_argument("dataset needs at least one observation");
  if (x.cols() < 1) throw std::invalid_argument("dataset needs at least one covariate");
  if (y.size() != x.rows())
    throw std::invalid_argument("response length " + std::to_string(y.size()) +
                                " does not match " + std::to_string(x.rows()) + " rows");
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument("dataset contains non-finite values");
}

double PartitionModel::evaluate(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != p)
    throw std::invalid_argument("covariate vector has length " + std::to_string(x.size()) +
                                ", model expects p=" + std::to_string(p));
  double best = hyperplanes.front().value_at(x);
  if (orientation == Orientation::convex) {
    for (std::size_t k = 1; k < hyperplanes.size(); ++k)
      best = std::max(best, hyperplanes[k].value_at(x));
  } else {
    for (std::size_t k = 1; k < hyperplanes.size(); ++k)
      best = std::min(best, hyperplanes[k].value_at(x));
  }
  return best;
}

int PartitionModel::assign_subset(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != p)
    throw std::invalid_argument("covariate vector has length " + std::to_string(x.size()) +
                                ", model expects p=" + std::to_string(p));
  int arg = 0;
  double best = hyperplanes.front().value_at(x);
  for (std::size_t k = 1; k < hyperplanes.size(); ++k) {
    const double v = hyperplanes[k].value_at(x);
    const bool better = orientation == Orientation::convex ? v > best : v < best;
    if (better) {
      best = v;
      arg = static_cast<int>(k);
    }
  }
  return arg;
}

Vector PartitionModel::evaluate_all(const Matrix& x) const {
  if (x.cols() != p)
    throw std::invalid_argument("covariate matrix has " + std::to_string(x.cols()) +
                                " columns, model expects p=" + std::to_string(p));
  Vector best = (x * hyperplanes.front().beta).array() + hyperplanes.front().alpha;
  for (std::size_t k = 1; k < hyperplanes.size(); ++k) {
    Vector v = (x * hyperplanes[k].beta).array() + hyperplanes[k].alpha;
    if (orientation == Orientation::convex)
      best = best.cwiseMax(v);
    else
      best = best.cwiseMin(v);
  }
  return best;
}

void PartitionModel::validate(Eigen::Index n, int n_min) const {
  if (hyperplanes.empty()) throw std::invalid_argument("model has no hyperplanes");
  if (hyperplanes.size() != subsets.size())
    throw std::invalid_argument("piece count does not match subset count");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const auto& subset : subsets) {
    if (static_cast<int>(subset.size()) < n_min)
      throw std::invalid_argument("subset smaller than n_min=" + std::to_string(n_min));
    for (int idx : subset) {
      if (idx < 0 || idx >= n) throw std::invalid_argument("subset index out of range");
      if (seen[static_cast<std::size_t>(idx)]) throw std::invalid_argument("subsets overlap");
      seen[static_cast<std::size_t>(idx)] = 1;
    }
  }
  for (char c : seen)
    if (!c) throw std::invalid_argument("subsets do not cover every observation");
  for (const auto& h : hyperplanes)
    if (h.beta.size() != p) throw std::invalid_argument("hyperplane dimension mismatch");
}

void CapConfig::validate() const {
  if (!(d_factor > 0.0)) throw std::invalid_argument("D must be positive");
  if (knots < 1) throw std::invalid_argument("knot count L must be at least 1");
  if (strategy == Strategy::random_projection && directions < 0)
    throw std::invalid_argument("direction count must be positive");
  if (min_obs_override && *min_obs_override < 1)
    throw std::invalid_argument("min-obs override must be positive");
}

int min_subset_size(Eigen::Index n, Eigen::Index p, double d_factor, std::optional<int> override) {
  if (override) return *override;
  if (n < 1 || p < 1 || !(d_factor > 0.0)) throw std::invalid_argument("bad n_min arguments");
  const double floor_term = 2.0 * static_cast<double>(p + 1);
  // ln(1) = 0: the growth term is vacuous for n = 1 and the 2(p+1) floor rules.
  double growth_term = 0.0;
  if (n > 1) growth_term = static_cast<double>(n) / (d_factor * std::log(static_cast<double>(n)));
  return static_cast<int>(std::ceil(std::max(growth_term, floor_term)));
}

std::vector<std::vector<int>> induced_partition(const std::vector<Hyperplane>& hyperplanes,
                                                Orientation orientation, const Dataset& data) {
  if (hyperplanes.empty()) throw std::invalid_argument("no hyperplanes");
  const Eigen::Index n = data.n();
  const std::size_t k_count = hyperplanes.size();
  std::vector<std::vector<int>> parts(k_count);

  // Column of values per piece, then a row-wise arg scan; iterating rows in
  // order keeps every subset sorted.
  Matrix vals(n, static_cast<Eigen::Index>(k_count));
  for (std::size_t k = 0; k < k_count; ++k)
    vals.col(static_cast<Eigen::Index>(k)) =
        (data.x * hyperplanes[k].beta).array() + hyperplanes[k].alpha;

  const bool convex = orientation == Orientation::convex;
  for (Eigen::Index i = 0; i < n; ++i) {
    int arg = 0;
    double best = vals(i, 0);
    for (std::size_t k = 1; k < k_count; ++k) {
      const double v = vals(i, static_cast<Eigen::Index>(k));
      if (convex ? v > best : v < best) {
        best = v;
        arg = static_cast<int>(k);
      }
    }
    parts[static_cast<std::size_t>(arg)].push_back(static_cast<int>(i));
  }
  return parts;
}

PartitionDiagnostics diagnostics(const PartitionModel& model, const Dataset& data) {
  PartitionDiagnostics out;
  out.diameters.reserve(model.subsets.size());
  double min_eig = std::numeric_limits<double>::infinity();

  for (const auto& subset : model.subsets) {
    const auto m = static_cast<Eigen::Index>(subset.size());
    double diam = 0.0;
    for (std::size_t a = 0; a + 1 < subset.size(); ++a)
      for (std::size_t b = a + 1; b < subset.size(); ++b)
        diam = std::max(diam, (data.x.row(subset[a]) - data.x.row(subset[b])).norm());
    out.diameters.push_back(diam);

    if (m == 0) continue;
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(data.p());
    for (int idx : subset) mean += data.x.row(idx);
    mean /= static_cast<double>(m);

    const double scale = diam > 0.0 ? 1.0 / diam : 0.0;
    Matrix gram = Matrix::Zero(data.p() + 1, data.p() + 1);
    Vector gamma(data.p() + 1);
    for (int idx : subset) {
      gamma[0] = 1.0;
      gamma.tail(data.p()) = (data.x.row(idx) - mean).transpose() * scale;
      gram.noalias() += gamma * gamma.transpose();
    }
    gram /= static_cast<double>(m);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
  }
  out.min_eigenvalue = std::isfinite(min_eig) ? min_eig : 0.0;
  return out;
}

PartitionModel negated(const PartitionModel& model) {
  PartitionModel out = model;
  out.orientation =
      model.orientation == Orientation::convex ? Orientation::concave : Orientation::convex;
  for (auto& h : out.hyperplanes) {
    h.alpha = -h.alpha;
    h.beta = -h.beta;
  }
  return out;
}

}  // namespace cap
