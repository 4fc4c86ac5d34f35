#pragma once

#include <string>
#include <vector>

namespace varcurve::checks {

struct CaseResult {
  std::string id;
  bool passed = false;
  double value = 0.0;  ///< observed error, rate or ratio
  double limit = 0.0;  ///< threshold it was compared with
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CaseResult> cases;
  bool passed() const;
  int failures() const;
};

/// Central finite-difference directional derivative vs the analytic gradient for every
/// functional kind on euclidean:2, sphere:2, torus:2 and so3, three random curves each.
SuiteResult gradient_suite(double tolerance = 1e-4, double epsilon = 1e-5);

struct ConvergenceStudy {
  std::string id;
  std::vector<int> grid;
  std::vector<double> error;  ///< sup-distance to the closed-form solution
  double order = 0.0;         ///< least-squares slope of -log(error) against log(N)
  double required = 0.0;
  bool position_only = false;
};

/// Refinement studies over N in {25, 50, 100, 200}.
std::vector<ConvergenceStudy> convergence_studies();
SuiteResult convergence_suite();

/// Closed-form references against the discrete functionals, and oracle self-consistency.
SuiteResult oracle_suite();

/// "gradient", "convergence" or "oracle"; throws ConfigError otherwise.
SuiteResult run_suite(const std::string& name);

/// Least-squares slope of -log(error) against log(N).
double fitted_order(const std::vector<int>& grid, const std::vector<double>& error);

}  // namespace varcurve::checks
