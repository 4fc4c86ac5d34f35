#pragma once

#include <string>
#include <vector>

#include "varcurve/constraints.hpp"
#include "varcurve/functionals.hpp"

namespace varcurve {

struct SolveOptions {
  int max_iters = 5000;
  /// Threshold on el_residual (Euclidean norm of the gradient over free samples).
  double grad_tol = 1e-6;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
  double step_floor = 1e-14;
  /// History stride; the first and final iterates are always recorded.
  int record_every = 1;
  /// Largest displacement of a single sample per accepted step on compact manifolds.
  double step_cap = 1.5707963267948966;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

enum class Verdict { converged, iter_limit, degenerate };

const char* to_string(Verdict v);

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double length = 0.0;
  double sup_velocity = 0.0;
  /// Accepted step size that produced this iterate (0 for the initial curve).
  double step = 0.0;
  /// Discrete winding numbers on torus manifolds, empty elsewhere.
  std::vector<int> winding;
};

struct SolveReport {
  DiscreteCurve minimizer;
  std::vector<IterationRecord> history;
  Verdict verdict = Verdict::iter_limit;
  int iterations = 0;
  double objective = 0.0;
  double residual = 0.0;
  /// Set for degenerate runs and step underflow.
  std::string message;
};

/**
 * Preconditioned Riemannian gradient descent with Armijo backtracking.
 *
 * The Riemannian gradient g is preconditioned by the flat Sobolev operator of
 * the objective's quadratic part (second differences for the acceleration
 * term, first differences for the speed terms) restricted to free samples and
 * projected back to the tangent spaces; since g is tangent the result is a
 * descent direction. Free samples move by exp; fixed samples are never touched.
 * Accepted steps satisfy the Armijo condition and strictly decrease the objective.
 *
 * x0 must already satisfy the constraints (see impose).
 */
SolveReport minimize(const FunctionalSpec& spec, const ConstraintSet& c, const DiscreteCurve& x0,
                     const SolveOptions& opts = {});

struct Seed {
  DiscreteCurve curve;
  std::string label;
};

struct MultistartResult {
  std::vector<SolveReport> reports;  ///< ordered like the seeds
  Eigen::MatrixXd sup_distance;      ///< pairwise sup-distance between minimizers
  Eigen::MatrixXd h2_distance;       ///< discrete H^2 distance, auxiliary
  std::vector<int> cluster;          ///< cluster id per seed, numbered by first appearance
  int cluster_count = 0;
};

inline constexpr double kClusterThreshold = 0.1;

/// Independent solves, up to `jobs` concurrently. Results do not depend on `jobs`.
MultistartResult multistart(const FunctionalSpec& spec, const ConstraintSet& c, const std::vector<Seed>& seeds,
                            const SolveOptions& opts = {}, int jobs = 1);

/// Single-linkage clusters of a symmetric distance matrix: i ~ j when d(i, j) < threshold.
std::vector<int> cluster_labels(const Eigen::MatrixXd& distance, double threshold = kClusterThreshold);

}  // namespace varcurve
