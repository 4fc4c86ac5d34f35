#pragma once

#include <string_view>
#include <vector>

#include "varcurve/manifold.hpp"

namespace varcurve {

enum class FieldKind { zero, constant_ambient, sphere_rotation, so3_left_invariant, torus_constant };

const char* to_string(FieldKind kind);
FieldKind field_kind_from_string(std::string_view name);

/**
 * Prior vector field A(t, x) for conditional extremals.
 *
 *   zero                 A = 0
 *   constant_ambient c   A = m(t) * P_x(c)        any manifold with ambient dim = |c|
 *   sphere_rotation w    A = m(t) * (w x x)       sphere:2
 *   so3_left_invariant W A = m(t) * R W           so3, W skew
 *   torus_constant c     A = m(t) * c             torus:|c|
 *
 * m(t) is an optional modulation given as samples on a uniform grid of [0, 1]
 * and interpolated linearly; without it m = 1.
 */
class PriorField {
 public:
  PriorField() = default;

  static PriorField zero();
  static PriorField constant_ambient(Vec c);
  static PriorField sphere_rotation(const Eigen::Vector3d& axis);
  /// Throws ConfigError unless `skew` is skew-symmetric.
  static PriorField so3_left_invariant(const Eigen::Matrix3d& skew);
  static PriorField torus_constant(Vec c);
  /// Build from a config kind name and flat parameter list (so3: row-major 3x3).
  static PriorField from_params(FieldKind kind, const std::vector<double>& params);

  PriorField with_modulation(std::vector<double> samples) const;

  FieldKind kind() const { return kind_; }
  const Vec& params() const { return params_; }
  const std::vector<double>& modulation_samples() const { return modulation_; }
  bool is_zero() const { return kind_ == FieldKind::zero; }

  double modulation(double t) const;

  Vec eval(const Manifold& m, double t, const VecRef& p) const;
  /// Gradient with respect to p of <g, eval(t, p)> for fixed g.
  Vec pullback(const Manifold& m, double t, const VecRef& p, const VecRef& g) const;

  /// Analytic bound on |A(t, x)| over all t and x.
  double bound() const;

  /// Throw ConfigError if this field cannot live on `m`, or if 10^4 random
  /// draws of (t, x) ever exceed bound(). Returns the largest sampled norm.
  double validate(const Manifold& m, int draws = 10000, unsigned seed = 0x5eed) const;

 private:
  FieldKind kind_ = FieldKind::zero;
  Vec params_;
  std::vector<double> modulation_;
};

}  // namespace varcurve
