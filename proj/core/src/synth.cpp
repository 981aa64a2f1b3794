#include "cap/synth.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "cap/rng.hpp"

namespace cap {

namespace {

// Fixed simplex weights for the exponential problem.
const Vector& problem2_weights() {
  static const Vector w = [] {
    Vector v(10);
    v << 0.0680, 0.0160, 0.1707, 0.1513, 0.1790, 0.2097, 0.0548, 0.0337, 0.0377, 0.0791;
    return v;
  }();
  return w;
}

double canonical_noise(ProblemId id) {
  switch (id) {
    case ProblemId::problem1: return 1.0;
    case ProblemId::problem2: return 0.1;
    case ProblemId::quad2d: return 0.25;
  }
  return 1.0;
}

Eigen::Index dimension(ProblemId id) {
  switch (id) {
    case ProblemId::problem1: return 5;
    case ProblemId::problem2: return 10;
    case ProblemId::quad2d: return 2;
  }
  return 0;
}

SynthData generate_impl(ProblemId id, Eigen::Index n, std::uint64_t seed, double noise) {
  if (n < 1) throw std::invalid_argument("sample size must be at least 1");
  const Eigen::Index p = dimension(id);
  RandomStream stream(seed);

  SynthData out;
  out.data.x.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      out.data.x(i, j) =
          id == ProblemId::quad2d ? 2.0 * stream.uniform() - 1.0 : stream.normal();

  out.true_mean.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.true_mean[i] = true_mean_at(id, out.data.x.row(i));

  out.data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.data.y[i] = out.true_mean[i] + noise * stream.normal();
  return out;
}

}  // namespace

ProblemId problem_from_string(const std::string& name) {
  if (name == "1" || name == "problem1") return ProblemId::problem1;
  if (name == "2" || name == "problem2") return ProblemId::problem2;
  if (name == "quad2d") return ProblemId::quad2d;
  throw std::invalid_argument("unknown problem '" + name + "' (expected 1, 2 or quad2d)");
}

const char* to_string(ProblemId id) {
  switch (id) {
    case ProblemId::problem1: return "problem1";
    case ProblemId::problem2: return "problem2";
    case ProblemId::quad2d: return "quad2d";
  }
  return "?";
}

double true_mean_at(ProblemId id, const Eigen::Ref<const Vector>& x) {
  switch (id) {
    case ProblemId::problem1: {
      const double s = x[0] + 0.5 * x[1] + x[2];
      return s * s - x[3] + 0.25 * x[4] * x[4];
    }
    case ProblemId::problem2:
      return std::exp(x.dot(problem2_weights()));
    case ProblemId::quad2d:
      return x[0] * x[0] + x[1] * x[1];
  }
  return 0.0;
}

SynthData gen_problem1(Eigen::Index n, std::uint64_t seed) {
  return generate_impl(ProblemId::problem1, n, seed, 1.0);
}

SynthData gen_problem2(Eigen::Index n, std::uint64_t seed) {
  return generate_impl(ProblemId::problem2, n, seed, 0.1);
}

SynthData gen_quad2d(Eigen::Index n, std::uint64_t seed) {
  return generate_impl(ProblemId::quad2d, n, seed, 0.25);
}

SynthData generate(const ProblemSpec& spec) {
  const double noise = spec.noise_scale < 0.0 ? canonical_noise(spec.id) : spec.noise_scale;
  return generate_impl(spec.id, spec.n, spec.seed, noise);
}

std::uint64_t test_set_seed(ProblemId id) {
  return 0x7e57u + static_cast<std::uint64_t>(id) * 1000003u;
}

RateStudyResult rate_study(ProblemId problem, std::span<const Eigen::Index> n_grid,
                           std::span<const std::uint64_t> seeds, const Fitter& fitter,
                           Eigen::Index test_n) {
  if (n_grid.empty() || seeds.empty()) throw std::invalid_argument("empty rate study grid");
  const SynthData test = generate_impl(problem, test_n, test_set_seed(problem), 0.0);

  RateStudyResult out;
  out.mean_mse.reserve(n_grid.size());
  for (const Eigen::Index n : n_grid) {
    double mse_sum = 0.0;
    for (const std::uint64_t seed : seeds) {
      const SynthData train = generate_impl(problem, n, seed, canonical_noise(problem));
      const auto start = std::chrono::steady_clock::now();
      const FittedPredictor fitted = fitter(train.data);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

      double err = 0.0;
      for (Eigen::Index i = 0; i < test.data.n(); ++i) {
        const double d = fitted.predict(test.data.x.row(i)) - test.true_mean[i];
        err += d * d;
      }
      err /= static_cast<double>(test.data.n());
      mse_sum += err;
      out.cells.push_back({n, seed, err, elapsed.count(), fitted.selected_pieces});
    }
    out.mean_mse.push_back(mse_sum / static_cast<double>(seeds.size()));
  }

  bool degenerate = false;
  for (double m : out.mean_mse) degenerate |= !(m > 0.0);
  if (degenerate || n_grid.size() < 2) {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  // Least-squares slope of log sqrt(MSE) on log n.
  const auto g = static_cast<double>(n_grid.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const double lx = std::log(static_cast<double>(n_grid[i]));
    const double ly = std::log(std::sqrt(out.mean_mse[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (g * sxy - sx * sy) / (g * sxx - sx * sx);
  return out;
}

}  // namespace cap
