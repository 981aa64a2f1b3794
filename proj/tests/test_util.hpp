#pragma once

#include <cap/rng.hpp>
#include <cap/types.hpp>
#include <vector>

namespace test_util {

inline cap::Dataset random_dataset(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  cap::RandomStream rs(seed);
  cap::Dataset d;
  d.x.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) d.x(i, j) = rs.normal();
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) d.y[i] = rs.normal();
  return d;
}

/// Hand-built max-affine model with random pieces; subsets are filled with a
/// balanced assignment so the partition invariants hold (the planes do not
/// need to have come from those subsets for evaluation tests).
inline cap::PartitionModel random_model(Eigen::Index p, int pieces, std::uint64_t seed,
                                        Eigen::Index n = 0) {
  cap::RandomStream rs(seed);
  cap::PartitionModel m;
  m.orientation = cap::Orientation::convex;
  m.p = p;
  for (int k = 0; k < pieces; ++k) {
    cap::Hyperplane h;
    h.alpha = rs.normal();
    h.beta = rs.normal_vector(p);
    m.hyperplanes.push_back(std::move(h));
  }
  m.subsets.assign(static_cast<std::size_t>(pieces), {});
  for (Eigen::Index i = 0; i < n; ++i)
    m.subsets[static_cast<std::size_t>(i) % static_cast<std::size_t>(pieces)].push_back(
        static_cast<int>(i));
  return m;
}

inline cap::Vector random_point(Eigen::Index p, cap::RandomStream& rs, double scale = 2.0) {
  cap::Vector x(p);
  for (Eigen::Index j = 0; j < p; ++j) x[j] = scale * rs.normal();
  return x;
}

/// Midpoint convexity check over random pairs; returns the largest violation
/// of evaluate(mid) <= (f(a)+f(b))/2 for convex models (mirrored for concave).
inline double max_midpoint_violation(const cap::PartitionModel& model, int pairs,
                                     std::uint64_t seed, double scale = 2.0) {
  cap::RandomStream rs(seed);
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const cap::Vector a = random_point(model.p, rs, scale);
    const cap::Vector b = random_point(model.p, rs, scale);
    const double lambda = rs.uniform();
    const cap::Vector mid = lambda * a + (1.0 - lambda) * b;
    const double chord = lambda * model.evaluate(a) + (1.0 - lambda) * model.evaluate(b);
    const double v = model.evaluate(mid);
    const double gap = model.orientation == cap::Orientation::convex ? v - chord : chord - v;
    worst = std::max(worst, gap);
  }
  return worst;
}

}  // namespace test_util
