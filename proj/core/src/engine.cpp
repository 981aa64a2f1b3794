#include "cap/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "cap/gcv.hpp"
#include "cap/parallel.hpp"
#include "cap/rng.hpp"

namespace cap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PlanePointwise {
  Vector top;        // best plane value per observation
  Vector second;     // runner-up value (-inf when K = 1)
  std::vector<int> arg;  // index of the best plane, lowest on ties

  static PlanePointwise build(const PartitionModel& model, const Dataset& data) {
    const Eigen::Index n = data.n();
    PlanePointwise out;
    out.top = (data.x * model.hyperplanes[0].beta).array() + model.hyperplanes[0].alpha;
    out.second = Vector::Constant(n, -kInf);
    out.arg.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t k = 1; k < model.hyperplanes.size(); ++k) {
      const Vector v =
          (data.x * model.hyperplanes[k].beta).array() + model.hyperplanes[k].alpha;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (v[i] > out.top[i]) {
          out.second[i] = out.top[i];
          out.top[i] = v[i];
          out.arg[static_cast<std::size_t>(i)] = static_cast<int>(k);
        } else if (v[i] > out.second[i]) {
          out.second[i] = v[i];
        }
      }
    }
    return out;
  }

  double excluding(Eigen::Index i, int k) const {
    return arg[static_cast<std::size_t>(i)] == k ? second[i] : top[i];
  }
};

double median_of(std::vector<double> v) {
  const std::size_t m = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(m / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (m % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

/// Fills in child fits and both objective scores for a planned candidate.
void score_candidate(CandidateSplit& cand, const Dataset& data, const PlanePointwise& point) {
  const FitResult left = fit_ls(data, cand.left_rows);
  const FitResult right = fit_ls(data, cand.right_rows);
  cand.left_plane = left.hyperplane;
  cand.right_plane = right.hyperplane;
  cand.split_sse = left.sse + right.sse;

  const Vector lv = (data.x * left.hyperplane.beta).array() + left.hyperplane.alpha;
  const Vector rv = (data.x * right.hyperplane.beta).array() + right.hyperplane.alpha;
  const Eigen::Index n = data.n();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = std::max({point.excluding(i, cand.subset_index), lv[i], rv[i]});
    const double r = data.y[i] - v;
    acc += r * r;
  }
  cand.train_mse = acc / static_cast<double>(n);
}

double safe_gcv(const PartitionModel& model, const Dataset& data) {
  try {
    return gcv_score(model, data);
  } catch (const std::invalid_argument&) {
    return kInf;  // tiny subsets (override below p+2) make GCV undefined
  }
}

ModelSequence run_impl(const Dataset& data, const CapConfig& cfg, bool fast) {
  data.validate();
  cfg.validate();

  if (cfg.orientation == Orientation::concave) {
    Dataset flipped{data.x, -data.y};
    CapConfig convex_cfg = cfg;
    convex_cfg.orientation = Orientation::convex;
    ModelSequence seq = run_impl(flipped, convex_cfg, fast);
    for (auto& m : seq.models) m = negated(m);
    return seq;
  }

  const Eigen::Index n = data.n();
  const int n_min = min_subset_size(n, data.p(), cfg.d_factor, cfg.min_obs_override);
  if (n < n_min)
    throw std::invalid_argument("n=" + std::to_string(n) +
                                " is below the minimum subset size n_min=" +
                                std::to_string(n_min));

  ModelSequence seq;
  {
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    const FitResult base = fit_ls(data, all);
    PartitionModel m1;
    m1.orientation = Orientation::convex;
    m1.p = data.p();
    m1.hyperplanes = {base.hyperplane};
    m1.subsets = {std::move(all)};
    seq.models.push_back(std::move(m1));
    seq.gcv.push_back(safe_gcv(seq.models.back(), data));
  }

  for (std::uint64_t iteration = 0;; ++iteration) {
    const PartitionModel& current = seq.models.back();
    const bool splittable =
        std::any_of(current.subsets.begin(), current.subsets.end(), [&](const auto& subset) {
          return static_cast<int>(subset.size()) >= 2 * n_min;
        });
    if (!splittable) break;

    const auto candidates = generate_candidates(current, data, cfg, iteration);
    if (candidates.empty()) break;

    const CandidateSplit& chosen = select_split(candidates, cfg.split_objective);
    PartitionModel next = chosen.apply(current);
    if (cfg.refit_enabled) next = refit(next, data, n_min);
    seq.models.push_back(std::move(next));
    seq.gcv.push_back(safe_gcv(seq.models.back(), data));

    if (fast && seq.gcv.size() >= 3) {
      const std::size_t last = seq.gcv.size() - 1;
      if (seq.gcv[last] > seq.gcv[last - 1] && seq.gcv[last - 1] > seq.gcv[last - 2]) break;
    }
  }

  seq.selected = select_min_score(seq.gcv);
  return seq;
}

}  // namespace

PartitionModel CandidateSplit::apply(const PartitionModel& parent) const {
  PartitionModel out = parent;
  const auto k = static_cast<std::size_t>(subset_index);
  out.hyperplanes[k] = left_plane;
  out.subsets[k] = left_rows;
  out.hyperplanes.push_back(right_plane);
  out.subsets.push_back(right_rows);
  return out;
}

std::vector<double> knots(int count) {
  if (count < 1) throw std::invalid_argument("knot count must be at least 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int l = 1; l <= count; ++l)
    out[static_cast<std::size_t>(l - 1)] = static_cast<double>(l) / (count + 1);
  return out;
}

std::vector<Vector> random_directions(int count, Eigen::Index p, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("direction count must be at least 1");
  if (p < 1) throw std::invalid_argument("dimension must be at least 1");
  RandomStream stream(seed);
  std::vector<Vector> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) dirs.push_back(stream.normal_vector(p));
  return dirs;
}

double global_mse(const PartitionModel& model, const Dataset& data) {
  const Vector fitted = model.evaluate_all(data.x);
  return (data.y - fitted).squaredNorm() / static_cast<double>(data.n());
}

std::vector<CandidateSplit> generate_candidates(const PartitionModel& model, const Dataset& data,
                                                const CapConfig& cfg, std::uint64_t draw) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const int n_min = min_subset_size(n, p, cfg.d_factor, cfg.min_obs_override);
  const std::vector<double> proportions = knots(cfg.knots);

  const bool projected = cfg.strategy == CapConfig::Strategy::random_projection;
  std::vector<Vector> dirs;
  if (projected)
    dirs = random_directions(cfg.resolved_directions(p), p, derive_seed(cfg.seed, draw));
  const int dir_count = projected ? static_cast<int>(dirs.size()) : static_cast<int>(p);

  std::vector<CandidateSplit> out;
  std::vector<double> coords;
  for (int k = 0; k < model.pieces(); ++k) {
    const auto& subset = model.subsets[static_cast<std::size_t>(k)];
    const auto m = static_cast<int>(subset.size());
    if (m < 2 * n_min) continue;

    for (int j = 0; j < dir_count; ++j) {
      coords.resize(subset.size());
      if (projected) {
        for (std::size_t r = 0; r < subset.size(); ++r)
          coords[r] = dirs[static_cast<std::size_t>(j)].dot(data.x.row(subset[r]));
      } else {
        for (std::size_t r = 0; r < subset.size(); ++r) coords[r] = data.x(subset[r], j);
      }
      const auto [lo_it, hi_it] = std::minmax_element(coords.begin(), coords.end());
      const double lo = *lo_it, hi = *hi_it;

      auto plan_split = [&](double threshold, int knot_index) -> bool {
        int left_count = 0;
        for (double c : coords) left_count += c <= threshold;
        const int right_count = m - left_count;
        if (left_count < n_min || right_count < n_min) return false;
        CandidateSplit cand;
        cand.subset_index = k;
        cand.direction_index = j;
        if (projected) cand.projection = dirs[static_cast<std::size_t>(j)];
        cand.knot_index = knot_index;
        cand.threshold = threshold;
        cand.left_rows.reserve(static_cast<std::size_t>(left_count));
        cand.right_rows.reserve(static_cast<std::size_t>(right_count));
        for (std::size_t r = 0; r < subset.size(); ++r)
          (coords[r] <= threshold ? cand.left_rows : cand.right_rows).push_back(subset[r]);
        out.push_back(std::move(cand));
        return true;
      };

      bool any_knot = false;
      for (std::size_t l = 0; l < proportions.size(); ++l) {
        const double a = proportions[l];
        any_knot |= plan_split(a * lo + (1.0 - a) * hi, static_cast<int>(l) + 1);
      }
      if (!any_knot) plan_split(median_of(coords), cfg.knots + 1);
    }
  }

  const PlanePointwise point = PlanePointwise::build(model, data);
  parallel_for(static_cast<std::int64_t>(out.size()), cfg.threads,
               [&](std::int64_t begin, std::int64_t end) {
                 for (std::int64_t c = begin; c < end; ++c)
                   score_candidate(out[static_cast<std::size_t>(c)], data, point);
               });
  return out;
}

const CandidateSplit& select_split(const std::vector<CandidateSplit>& candidates,
                                   CapConfig::SplitObjective objective) {
  if (candidates.empty())
    throw std::invalid_argument("no candidate splits available");
  std::size_t best = 0;
  double best_score = kInf;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double score = objective == CapConfig::SplitObjective::global
                             ? candidates[c].train_mse
                             : candidates[c].split_sse;
    if (score < best_score) {
      best_score = score;
      best = c;
    }
  }
  return candidates[best];
}

PartitionModel refit(const PartitionModel& model, const Dataset& data, int n_min) {
  const auto parts = induced_partition(model.hyperplanes, model.orientation, data);
  for (const auto& part : parts)
    if (static_cast<int>(part.size()) < n_min) return model;

  PartitionModel out;
  out.orientation = model.orientation;
  out.p = model.p;
  out.hyperplanes.reserve(parts.size());
  out.subsets = parts;
  for (const auto& part : parts) out.hyperplanes.push_back(fit_ls(data, part).hyperplane);
  return out;
}

ModelSequence run_cap(const Dataset& data, const CapConfig& cfg) {
  if (cfg.strategy != CapConfig::Strategy::cardinal)
    throw std::invalid_argument("run_cap searches cardinal directions; use run_fast_cap");
  return run_impl(data, cfg, /*fast=*/false);
}

ModelSequence run_fast_cap(const Dataset& data, const CapConfig& cfg) {
  if (cfg.strategy != CapConfig::Strategy::random_projection)
    throw std::invalid_argument("run_fast_cap requires the random-projection strategy");
  return run_impl(data, cfg, /*fast=*/true);
}

}  // namespace cap
