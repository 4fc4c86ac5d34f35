#pragma once

#include <functional>
#include <vector>

#include "varcurve/manifold.hpp"

namespace varcurve {

enum class DomainKind { interval, circle };

const char* to_string(DomainKind kind);
DomainKind domain_from_string(std::string_view name);

/**
 * Curve sampled on the uniform grid t_j = j / N.
 *
 * Interval domains store N + 1 samples (t = 0 ... 1); circle domains store N
 * samples with indices taken mod N. Samples are the columns of an
 * ambient_dim x sample_count matrix.
 */
class DiscreteCurve {
 public:
  /// Throws UsageError if N < 4 or a column is off the manifold by more than 1e-9.
  DiscreteCurve(ManifoldPtr manifold, DomainKind domain, Eigen::MatrixXd samples);

  /// Sample fn(t_j) on the grid, canonicalizing each point onto the manifold.
  static DiscreteCurve sample(ManifoldPtr manifold, DomainKind domain, int n,
                              const std::function<Vec(double)>& fn);
  static DiscreteCurve constant(ManifoldPtr manifold, DomainKind domain, int n, const VecRef& point);

  const Manifold& manifold() const { return *manifold_; }
  const ManifoldPtr& manifold_ptr() const { return manifold_; }
  DomainKind domain() const { return domain_; }

  /// Grid resolution N (spacing 1/N).
  int grid_size() const { return n_; }
  int sample_count() const { return static_cast<int>(samples_.cols()); }
  /// Number of consecutive-sample segments: N on both domains.
  int segment_count() const { return n_; }
  double spacing() const { return 1.0 / n_; }
  double time(int j) const { return static_cast<double>(j) / n_; }

  /// Sample index, wrapped mod N on circle domains.
  int index(int j) const;
  auto sample(int j) const { return samples_.col(index(j)); }
  const Eigen::MatrixXd& samples() const { return samples_; }

  /// Overwrite one sample. The point is stored as given (callers canonicalize).
  void set_sample(int j, const VecRef& point);

 private:
  ManifoldPtr manifold_;
  DomainKind domain_;
  int n_;
  Eigen::MatrixXd samples_;
};

/// One tangent vector per sample of a curve, stored as columns.
struct TangentField {
  DiscreteCurve base;
  Eigen::MatrixXd vectors;

  TangentField(DiscreteCurve curve, Eigen::MatrixXd vecs);
  static TangentField zeros(const DiscreteCurve& curve);

  auto operator[](int j) const { return vectors.col(j); }
  int size() const { return static_cast<int>(vectors.cols()); }
};

/// Ambient displacement of each segment j -> j+1 (N columns). Throws
/// DegenerateCurveError if a segment reaches the cut locus.
Eigen::MatrixXd segment_differences(const DiscreteCurve& x);

/// Throws DegenerateCurveError at the first segment within kCutLocusTolerance of the cut locus.
void check_spacing(const DiscreteCurve& x);

/// Projected central differences; one-sided second-order stencils at interval ends.
TangentField velocity(const DiscreteCurve& x);

/// Tangential part of the ambient second difference (Gauss formula). Interval end
/// values use one-sided second-order stencils and never enter functionals.
TangentField covariant_accel(const DiscreteCurve& x);

/// Covariant derivative of a field along its base curve via projected differences.
TangentField covariant_derivative(const TangentField& f);

/// Trapezoid-rule weights for integrating a per-sample quantity over the domain.
Eigen::VectorXd trapezoid_weights(int sample_count, DomainKind domain);

/// Discrete sum over j <= k of the squared L^2 norms of the covariant derivatives; k <= 2.
double sobolev_norm_sq(const TangentField& f, int k);

/// Max over samples of sum over j <= k of |grad_t^j f|; k <= 2.
double sup_norm(const TangentField& f, int k);

/// Sum of geodesic distances between consecutive samples (closing segment included on circles).
double length(const DiscreteCurve& x);

/// Discrete squared L^2 norm of the velocity: sum_j dist(x_j, x_{j+1})^2 / h.
/// Cauchy-Schwarz gives length^2 <= speed_norm_sq and
/// dist(x_a, x_b)^2 <= |t_a - t_b| * speed_norm_sq exactly.
double speed_norm_sq(const DiscreteCurve& x);

/// Max over samples of the central-difference speed.
double sup_speed(const DiscreteCurve& x);

/// Max over j of dist(x_j, y_j). Curves must share manifold, domain and grid.
double sup_distance(const DiscreteCurve& x, const DiscreteCurve& y);

/// Discrete H^2 distance between curves, measured on ambient segment differences.
double h2_distance(const DiscreteCurve& x, const DiscreteCurve& y);

/**
 * Per-coordinate winding numbers of a torus curve.
 *
 * Interval domain: (sum of lifted increments - minimal displacement x_0 -> x_N) / 2pi.
 * Circle domain: (sum of lifted increments around the loop) / 2pi.
 * Throws UsageError for non-torus manifolds.
 */
std::vector<int> winding_numbers(const DiscreteCurve& x);

/// Lifted angular displacement of each torus coordinate (sum of wrapped increments).
Vec lifted_displacement(const DiscreteCurve& x);

}  // namespace varcurve
