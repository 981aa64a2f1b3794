#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when an iterative solver or a regression step fails; the CLI maps
/// this to exit code 3 (validation problems use std::invalid_argument, exit 2).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Orientation { convex, concave };

inline const char* to_string(Orientation o) {
  return o == Orientation::convex ? "convex" : "concave";
}

/// Regression input: n observations of p covariates plus a response.
struct Dataset {
  Matrix x;  // n rows by p columns
  Vector y;  // length n

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }

  /// Throws std::invalid_argument unless n >= 1, p >= 1, rows match and all
  /// entries are finite.
  void validate() const;
};

/// One affine piece: alpha + beta . x.
struct Hyperplane {
  double alpha = 0.0;
  Vector beta;

  double value_at(const Eigen::Ref<const Vector>& x) const { return alpha + beta.dot(x); }
};

/// Max-affine (convex) or min-affine (concave) model: K hyperplanes plus the
/// observation partition they were fit on. Subsets hold 0-based row indices,
/// each sorted ascending; they are pairwise disjoint and cover every row.
struct PartitionModel {
  Orientation orientation = Orientation::convex;
  Eigen::Index p = 0;
  std::vector<Hyperplane> hyperplanes;
  std::vector<std::vector<int>> subsets;

  int pieces() const { return static_cast<int>(hyperplanes.size()); }

  /// max over pieces for convex models, min for concave.
  double evaluate(const Eigen::Ref<const Vector>& x) const;

  /// Index of the dominant piece at x (argmax for convex, argmin for
  /// concave); ties go to the lowest index.
  int assign_subset(const Eigen::Ref<const Vector>& x) const;

  /// Evaluations at every row of a dataset-sized covariate matrix.
  Vector evaluate_all(const Matrix& x) const;

  void validate(Eigen::Index n, int n_min) const;
};

/// Models M_1..M_K recorded along a fitting path, with their GCV scores.
/// models[i] has exactly i+1 pieces; selected is a 0-based index.
struct ModelSequence {
  std::vector<PartitionModel> models;
  std::vector<double> gcv;
  int selected = 0;

  const PartitionModel& best() const { return models.at(static_cast<std::size_t>(selected)); }
  int selected_pieces() const { return selected + 1; }
};

struct CapConfig {
  enum class Strategy { cardinal, random_projection };
  enum class SplitObjective { global, local };

  double d_factor = 3.0;  // D, log scaling factor for the minimum subset size
  int knots = 10;         // L, candidate split points per subset/direction
  Strategy strategy = Strategy::cardinal;
  int directions = 0;  // P' random search directions; 0 means "covariate dimension"
  SplitObjective split_objective = SplitObjective::global;
  bool refit_enabled = true;
  Orientation orientation = Orientation::convex;
  std::uint64_t seed = 0;
  std::optional<int> min_obs_override;
  int threads = 0;  // execution knob only, 0 = hardware concurrency

  int resolved_directions(Eigen::Index p) const {
    return directions > 0 ? directions : static_cast<int>(p);
  }

  void validate() const;
};

/// Per-subset diameters and the smallest eigenvalue of the scaled design
/// Gram matrices; a runtime check that the partition stays well conditioned.
struct PartitionDiagnostics {
  std::vector<double> diameters;
  double min_eigenvalue = 0.0;
};

/// Minimum observations per subset: override if present, otherwise
/// ceil(max(n / (D ln n), 2 (p + 1))).
int min_subset_size(Eigen::Index n, Eigen::Index p, double d_factor,
                    std::optional<int> override = std::nullopt);

/// Partition induced by the hyperplanes: each observation goes to its
/// dominant piece. Subsets may come back empty; the caller decides whether
/// that is acceptable.
std::vector<std::vector<int>> induced_partition(const std::vector<Hyperplane>& hyperplanes,
                                                Orientation orientation, const Dataset& data);

PartitionDiagnostics diagnostics(const PartitionModel& model, const Dataset& data);

/// Flips a model between convex and concave by negating every piece.
PartitionModel negated(const PartitionModel& model);

}  // namespace cap
