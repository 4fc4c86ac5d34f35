#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varcurve/constraints.hpp"
#include "varcurve/functionals.hpp"
#include "varcurve/optimizer.hpp"

namespace varcurve {

/**
 * One solve, as read from a JSON config:
 *
 *   {
 *     "manifold": "torus:1",
 *     "domain": "interval",                      (default interval; "circle" for closed curves)
 *     "N": 200,
 *     "functional": {"kind": "tension", "tau": 1.0}
 *                 | {"kind": "conditional", "k": 1,
 *                    "field": {"kind": "constant_ambient", "params": [1, 0], "modulation": [..]}}
 *                 | {"kind": "energy", "k": 2},
 *     "constraints": {"kind": "clamped", "k": 2,
 *                     "left": {"position": [..], "velocity": [..]}, "right": {..}}
 *                  | {"kind": "interpolation", "knots": [{"t": 0.5, "position": [..]}, ..]}
 *                  | {"kind": "periodic"},
 *     "winding_hint": [1],
 *     "seed_direction": [..],
 *     "solver": {"max_iters": 5000, "grad_tol": 1e-6, "armijo_c1": 1e-4, "backtrack": 0.5,
 *                "initial_step": 1.0, "step_floor": 1e-14, "record_every": 1, "step_cap": 1.5707963267948966},
 *     "evaluate_only": false,
 *     "output": {"report": "report.json", "curve": "minimizer.csv"}
 *   }
 *
 * Only manifold, N, functional and constraints are required.
 */
struct RunConfig {
  std::string manifold_id;
  ManifoldPtr manifold;
  DomainKind domain = DomainKind::interval;
  int n = 0;
  FunctionalSpec functional = FunctionalSpec::energy(1);
  ConstraintSet constraints = ConstraintSet::periodic();
  SeedHint hint;
  SolveOptions solver;
  bool evaluate_only = false;
  std::string report_name = "report.json";
  std::string curve_name = "minimizer.csv";
};

/// Throws ConfigError with a readable message on any schema or consistency problem.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Copy of cfg with one sweep parameter changed: "tau" (tension functionals)
/// or "winding" (first hint coordinate, integer values only).
RunConfig with_parameter(const RunConfig& cfg, std::string_view name, double value);

/// Seed the configured problem (piecewise geodesic with the hint).
DiscreteCurve seed_curve(const RunConfig& cfg);

/// Seed then minimize; evaluate_only runs the solver with a zero iteration budget.
SolveReport run(const RunConfig& cfg);

/// Report JSON: verdict, iterations, final objective and residual, history, minimizer file name.
std::string report_json(const RunConfig& cfg, const SolveReport& report, const std::string& curve_file);

}  // namespace varcurve
