#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "varcurve/curve.hpp"

namespace varcurve {

struct BoundaryData {
  Vec position;
  std::optional<Vec> velocity;
};

/// Prescribed position and derivatives up to order k-1 at both ends of the interval.
struct Clamped {
  int k = 1;
  BoundaryData left;
  BoundaryData right;
};

struct Knot {
  double t = 0.0;
  Vec position;
};

/// Prescribed positions at grid times, velocities free.
struct Interpolation {
  std::vector<Knot> knots;
};

/// Closed curves on the circle domain with no fixed samples.
struct Periodic {};

class ConstraintSet {
 public:
  using Kind = std::variant<Clamped, Interpolation, Periodic>;

  /// k = 2 requires both velocities; k = 1 takes positions only.
  static ConstraintSet clamped(int k, BoundaryData left, BoundaryData right);
  /// Knot times must be distinct and lie in [0, 1].
  static ConstraintSet interpolation(std::vector<Knot> knots);
  static ConstraintSet periodic();

  const Kind& kind() const { return kind_; }
  /// Domain the constraint naturally lives on (interpolation accepts both).
  bool supports(DomainKind domain) const;

  /// Throw ConfigError unless every point and velocity lives on (or is tangent to) m.
  void validate(const Manifold& m) const;

 private:
  explicit ConstraintSet(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Integer winding per torus coordinate (or a single count of full extra turns on
/// sphere / SO(3)), plus an optional ambient direction that picks the great
/// circle when the endpoints of a segment are equal or antipodal.
struct SeedHint {
  std::vector<int> winding;
  std::optional<Vec> direction;

  bool empty() const { return winding.empty() && !direction; }
};

/// Sample index of a knot time on a grid of size N. Throws ConfigError
/// ("knot time not on grid") unless t * N is an integer to 1e-9.
int knot_index(double t, int n, DomainKind domain = DomainKind::interval);

/**
 * Which samples the optimizer may move.
 *
 *   clamped k=1    interior 1..N-1
 *   clamped k=2    2..N-2 (samples 0, 1, N-1, N are fixed)
 *   interpolation  everything except knot samples
 *   periodic       all N samples (circle domain)
 */
std::vector<bool> free_mask(const ConstraintSet& c, int n, DomainKind domain = DomainKind::interval);

/**
 * Overwrite the fixed samples of x. Clamped k=2 encodes the boundary
 * velocities by x_1 = exp(x_0, v / N) and x_{N-1} = exp(x_N, -w / N).
 * Idempotent. Throws ConfigError if |v| / N reaches the injectivity radius.
 */
DiscreteCurve impose(const ConstraintSet& c, const DiscreteCurve& x);

/**
 * Piecewise-geodesic curve through the fixed data, feasible by construction.
 *
 * The winding hint applies to the first segment between consecutive fixed
 * samples (the middle segment for clamped k=2, the closing loop for periodic):
 * on the torus it adds 2 pi w_i to the lifted displacement of coordinate i;
 * on the sphere and SO(3) it adds w full turns along the same geodesic.
 * Throws ConfigError when a segment joins cut-locus points and no hint was given.
 */
DiscreteCurve seed(const ConstraintSet& c, ManifoldPtr m, int n, const SeedHint& hint = {},
                   DomainKind domain = DomainKind::interval);

}  // namespace varcurve
