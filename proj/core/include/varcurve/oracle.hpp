#pragma once

#include <optional>
#include <vector>

#include "varcurve/curve.hpp"

namespace varcurve::oracle {

enum class CurveKind { hermite_cubic, tension_1d, tension_spline, geodesic, line };

const char* to_string(CurveKind kind);

enum class EndCondition { clamped, position_only };

/**
 * Closed-form reference curve.
 *
 * Euclidean kinds (hermite_cubic, tension_1d, tension_spline, line) evaluate
 * position and derivatives up to order 4 per coordinate. Geodesics evaluate
 * position only, from formulas written independently of the manifold classes.
 */
class ClosedFormCurve {
 public:
  CurveKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double tau() const { return tau_; }

  Vec eval(double t) const;
  /// order in 0..4; Euclidean kinds only.
  Vec derivative(double t, int order) const;

  /**
   * Coefficients per coordinate (rows): monomials 1, t, t^2, t^3 for
   * hermite_cubic; basis 1, t, cosh(tau t), sinh(tau t) for tension_1d;
   * p and q for line. Empty for splines and geodesics.
   */
  const Eigen::MatrixXd& coefficients() const { return report_; }

  /// Piece boundaries of spline kinds (first start .. last end); {0, 1} otherwise.
  std::vector<double> breaks() const;

  /// Geodesic only: metric speed (= length over [0, 1]).
  double speed() const { return speed_; }

  /// Grid samples t_j = j / N, canonicalized onto m.
  DiscreteCurve sample(ManifoldPtr m, DomainKind domain, int n) const;

 private:
  friend ClosedFormCurve hermite_cubic(const Vec&, const Vec&, const Vec&, const Vec&);
  friend ClosedFormCurve tension_spline(const std::vector<double>&, const std::vector<Vec>&, double,
                                        EndCondition, const std::optional<Vec>&, const std::optional<Vec>&);
  friend ClosedFormCurve tension_1d(const Vec&, const Vec&, const Vec&, const Vec&, double, EndCondition);
  friend ClosedFormCurve geodesic(const Manifold&, const Vec&, const Vec&, const std::vector<int>&,
                                  const std::optional<Vec>&);
  friend struct LineResult conditional_line(const Vec&, const Vec&, const Vec&);

  struct Piece {
    double start = 0.0;
    double width = 1.0;
    bool exponential = false;  // basis 1, s, e^{-tau s}, e^{-tau (w - s)} instead of the shifted cosh/sinh basis
    Eigen::MatrixXd coeffs;    // dim x 4
  };

  Vec spline_derivative(double t, int order) const;

  CurveKind kind_ = CurveKind::line;
  int dim_ = 0;
  double tau_ = 0.0;
  Eigen::MatrixXd report_;
  Eigen::MatrixXd monomial_;  // hermite and line: dim x 4
  std::vector<Piece> pieces_;
  ManifoldKind manifold_ = ManifoldKind::euclidean;
  Vec base_;
  Vec direction_;  // unit tangent (geodesic) or total displacement (torus)
  double speed_ = 0.0;
};

/// Unique cubic with x(0) = p, x'(0) = v, x(1) = q, x'(1) = w (4 x 4 solve).
ClosedFormCurve hermite_cubic(const Vec& p, const Vec& v, const Vec& q, const Vec& w);

/**
 * Solution of x'''' - tau^2 x'' = 0 on [0, 1]. Clamped matches value and first
 * derivative at both ends; position_only imposes x''(0) = x''(1) = 0 and ignores v, w.
 * Requires 0 < tau <= 50.
 */
ClosedFormCurve tension_1d(const Vec& p, const Vec& v, const Vec& q, const Vec& w, double tau,
                           EndCondition bc);

/**
 * Piecewise tension spline through (t_i, y_i), C^2 at interior knots, with
 * natural (position_only) or clamped end conditions; tau = 0 gives the cubic spline.
 * Outside [t_0, t_last] the end pieces are extrapolated.
 */
ClosedFormCurve tension_spline(const std::vector<double>& times, const std::vector<Vec>& values, double tau,
                               EndCondition bc = EndCondition::position_only,
                               const std::optional<Vec>& left_velocity = std::nullopt,
                               const std::optional<Vec>& right_velocity = std::nullopt);

/**
 * Constant-speed geodesic from p to q covering the minimal angle plus 2 pi per
 * winding turn (torus: one integer per coordinate). `plane` picks the great
 * circle (or rotation axis direction) when p and q are equal or at the cut locus.
 * Throws ConfigError at the cut locus without plane data.
 */
ClosedFormCurve geodesic(const Manifold& m, const Vec& p, const Vec& q, const std::vector<int>& winding = {},
                         const std::optional<Vec>& plane = std::nullopt);

struct LineResult {
  ClosedFormCurve curve;
  double value = 0.0;
};

/// Straight line p -> q at constant velocity; value 1/2 |(q - p) - a|^2.
LineResult conditional_line(const Vec& p, const Vec& q, const Vec& a);

/// 1/2 int_0^1 (|x''|^2 + tau^2 |x'|^2) dt by composite Gauss-Legendre quadrature (Euclidean kinds).
double tension_value(const ClosedFormCurve& x, double tau);

}  // namespace varcurve::oracle
