#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varcurve/optimizer.hpp"

namespace varcurve {

/// Discrete Palais-Smale bookkeeping over the recorded iterates of one run.
struct PSSummary {
  double max_objective = 0.0;
  double max_length = 0.0;
  /// max length / max objective (infinite when the objective is zero and some length is not).
  double length_per_objective = 0.0;
  /// Tension runs only: every iterate has length^2 <= 2 objective / tau^2.
  bool tension_checked = false;
  bool tension_bound_holds = true;
  /// Iterations whose record breaks the tension bound.
  std::vector<int> violations;
};

PSSummary ps_diagnostics(const SolveReport& report, const FunctionalSpec& spec);

/// Assessment of an externally produced sequence of curves (e.g. wrapped geodesics).
struct SequenceAssessment {
  std::vector<double> objectives;
  std::vector<double> lengths;
  Eigen::MatrixXd sup_distance;
  double max_objective = 0.0;
  double min_length_gap = 0.0;   ///< smallest length increment between consecutive curves
  double min_pairwise = 0.0;     ///< smallest off-diagonal sup-distance
  int cluster_count = 0;
  /// Objectives stay at most `objective_bound` while lengths keep growing and no two
  /// curves cluster: a bounded sequence with no convergent subsequence.
  bool ps_failure_witness = false;
};

SequenceAssessment assess_sequence(const FunctionalSpec& spec, const std::vector<DiscreteCurve>& curves,
                                   double objective_bound);

/// Hoelder check dist(x_a, x_b) <= |t_a - t_b|^{1/2} |x'|_0 on random index pairs.
struct EquicontinuityCheck {
  int pairs = 0;
  int violations = 0;
  /// Largest dist / (|t_a - t_b|^{1/2} |x'|_0) seen.
  double worst_ratio = 0.0;
  bool holds() const { return violations == 0; }
};

EquicontinuityCheck equicontinuity(const DiscreteCurve& x, int pairs = 100, std::uint64_t seed = 1);

}  // namespace varcurve
