#include "varcurve/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace varcurve {

namespace {

// Rounding allowance for inequalities that hold exactly in exact arithmetic.
constexpr double kRelSlack = 1e-12;

}  // namespace

PSSummary ps_diagnostics(const SolveReport& report, const FunctionalSpec& spec) {
  PSSummary s;
  const double tau = spec.tau();
  s.tension_checked = std::holds_alternative<Tension>(spec.kind()) && tau > 0.0;
  for (const auto& r : report.history) {
    s.max_objective = std::max(s.max_objective, r.objective);
    s.max_length = std::max(s.max_length, r.length);
    if (s.tension_checked) {
      const double bound = 2.0 * r.objective / (tau * tau);
      if (r.length * r.length > bound * (1.0 + kRelSlack) + kRelSlack) {
        s.tension_bound_holds = false;
        s.violations.push_back(r.iteration);
      }
    }
  }
  if (s.max_objective > 0.0) {
    s.length_per_objective = s.max_length / s.max_objective;
  } else {
    s.length_per_objective = s.max_length > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return s;
}

SequenceAssessment assess_sequence(const FunctionalSpec& spec, const std::vector<DiscreteCurve>& curves,
                                   double objective_bound) {
  SequenceAssessment a;
  const int n = static_cast<int>(curves.size());
  a.sup_distance = Eigen::MatrixXd::Zero(n, n);
  for (const auto& x : curves) {
    a.objectives.push_back(evaluate(spec, x));
    a.lengths.push_back(length(x));
  }
  a.max_objective = n > 0 ? *std::max_element(a.objectives.begin(), a.objectives.end()) : 0.0;
  a.min_length_gap = std::numeric_limits<double>::infinity();
  for (int i = 1; i < n; ++i) {
    a.min_length_gap = std::min(a.min_length_gap, a.lengths[static_cast<std::size_t>(i)] -
                                                      a.lengths[static_cast<std::size_t>(i - 1)]);
  }
  a.min_pairwise = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = sup_distance(curves[static_cast<std::size_t>(i)], curves[static_cast<std::size_t>(j)]);
      a.sup_distance(i, j) = a.sup_distance(j, i) = d;
      a.min_pairwise = std::min(a.min_pairwise, d);
    }
  }
  const auto labels = cluster_labels(a.sup_distance);
  a.cluster_count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  a.ps_failure_witness = n >= 2 && a.max_objective <= objective_bound && a.min_length_gap > 0.0 &&
                         a.cluster_count == n;
  return a;
}

EquicontinuityCheck equicontinuity(const DiscreteCurve& x, int pairs, std::uint64_t seed) {
  EquicontinuityCheck c;
  const double norm = std::sqrt(speed_norm_sq(x));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, x.sample_count() - 1);
  for (int i = 0; i < pairs; ++i) {
    const int a = pick(rng);
    int b = pick(rng);
    if (a == b) b = (b + 1) % x.sample_count();
    double gap = std::abs(x.time(a) - x.time(b));
    // On the circle the shorter way around is also a curve segment.
    if (x.domain() == DomainKind::circle) gap = std::min(gap, 1.0 - gap);
    const double d = x.manifold().dist(x.sample(a), x.sample(b));
    const double bound = std::sqrt(gap) * norm;
    ++c.pairs;
    if (bound > 0.0) c.worst_ratio = std::max(c.worst_ratio, d / bound);
    if (d > bound * (1.0 + kRelSlack) + kRelSlack) ++c.violations;
  }
  return c;
}

}  // namespace varcurve
