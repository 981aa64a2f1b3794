#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cap/types.hpp"

namespace cap {

enum class ProblemId { problem1, problem2, quad2d };

ProblemId problem_from_string(const std::string& name);
const char* to_string(ProblemId id);

struct ProblemSpec {
  ProblemId id = ProblemId::problem1;
  Eigen::Index n = 0;
  std::uint64_t seed = 0;
  double noise_scale = -1.0;  // negative means the problem's canonical scale
};

/// Generated observations plus the noiseless mean, kept for test-error
/// measurement against the truth.
struct SynthData {
  Dataset data;
  Vector true_mean;
};

/// y = (x1 + 0.5 x2 + x3)^2 - x4 + 0.25 x5^2 + e, e ~ N(0,1), x ~ N_5(0,I).
SynthData gen_problem1(Eigen::Index n, std::uint64_t seed);

/// y = exp(x . w) + e, e ~ N(0, 0.1^2), x ~ N_10(0,I), w a fixed simplex
/// weight vector.
SynthData gen_problem2(Eigen::Index n, std::uint64_t seed);

/// y = x1^2 + x2^2 + e, e ~ N(0, 0.25^2), x ~ Unif[-1,1]^2.
SynthData gen_quad2d(Eigen::Index n, std::uint64_t seed);

SynthData generate(const ProblemSpec& spec);

/// Noiseless mean of a problem at one covariate vector.
double true_mean_at(ProblemId id, const Eigen::Ref<const Vector>& x);

/// A fitted regressor handed back by a Fitter, plus the model size it chose.
struct FittedPredictor {
  std::function<double(const Vector&)> predict;
  int selected_pieces = 0;
};
using Fitter = std::function<FittedPredictor(const Dataset&)>;

struct RateCell {
  Eigen::Index n = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;
  double seconds = 0.0;
  int selected_pieces = 0;
};

struct RateStudyResult {
  double slope = 0.0;  // NaN when some grid point reached zero error
  std::vector<RateCell> cells;
  std::vector<double> mean_mse;  // one entry per grid point
};

/// Fits at every grid size, averages test MSE over seeds against the true
/// mean on a fixed test set, and returns the least-squares slope of
/// log sqrt(MSE) against log n.
RateStudyResult rate_study(ProblemId problem, std::span<const Eigen::Index> n_grid,
                           std::span<const std::uint64_t> seeds, const Fitter& fitter,
                           Eigen::Index test_n = 10000);

/// Seed of the shared test set used by rate_study and the bench command.
std::uint64_t test_set_seed(ProblemId id);

}  // namespace cap
