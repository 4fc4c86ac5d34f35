#pragma once

#include <memory>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace varcurve {

using Vec = Eigen::VectorXd;
using VecRef = Eigen::Ref<const Eigen::VectorXd>;

enum class ManifoldKind { euclidean, sphere, torus, so3 };

/// Distance from the cut locus below which log/transport refuse to answer.
inline constexpr double kCutLocusTolerance = 1e-8;

/// A tangent vector together with the point it is attached to.
struct TangentVector {
  Vec base;
  Vec components;
};

/**
 * Complete Riemannian manifold isometrically embedded in an ambient
 * Euclidean space, with the induced metric.
 *
 * Points and tangent vectors are plain ambient coordinate vectors. The
 * ambient inner product is the metric, so covariant derivatives along curves
 * reduce to tangential projection of ambient derivatives.
 *
 * SO(3) is stored as row-major 3x3 matrices in R^9 with the Frobenius inner
 * product (no 1/2 factor): a unit-speed rotation about a fixed axis has
 * speed sqrt(2), and every functional value on SO(3) carries that scale.
 *
 * Instances are immutable; share them freely across threads.
 */
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual ManifoldKind kind() const = 0;
  /// Config id, e.g. "sphere:2" or "so3".
  virtual std::string id() const = 0;
  virtual int ambient_dim() const = 0;
  virtual int dim() const = 0;
  virtual bool compact() const = 0;
  /// +inf for Euclidean space.
  virtual double injectivity_radius() const = 0;

  virtual Vec exp(const VecRef& p, const VecRef& v) const = 0;
  /// Inverse of exp near p. Throws CutLocusError within kCutLocusTolerance of the cut locus.
  virtual Vec log(const VecRef& p, const VecRef& q) const = 0;
  /// Parallel transport of u (at p) along the minimizing geodesic to q.
  virtual Vec transport(const VecRef& p, const VecRef& q, const VecRef& u) const = 0;
  virtual Vec project_tangent(const VecRef& p, const VecRef& a) const = 0;
  virtual double dist(const VecRef& p, const VecRef& q) const = 0;

  /// Ambient displacement from p to q used by finite differences. This is
  /// q - p except on the torus, where each angle takes its minimal representative.
  virtual Vec difference(const VecRef& p, const VecRef& q) const { return q - p; }

  /// Gradient with respect to p of <g, project_tangent(p, a)>, holding a and g fixed.
  virtual Vec projection_pullback(const VecRef& p, const VecRef& a, const VecRef& g) const = 0;

  /// Pull ambient coordinates back onto the manifold (normalize, re-orthogonalize, reduce mod 2pi).
  virtual Vec canonicalize(const VecRef& p) const = 0;
  virtual double constraint_residual(const VecRef& p) const = 0;
  virtual double tangent_residual(const VecRef& p, const VecRef& v) const = 0;
  virtual bool near_cut_locus(const VecRef& p, const VecRef& q) const = 0;

  virtual Vec base_point() const = 0;
  virtual Vec random_point(std::mt19937_64& rng) const = 0;

  /// Gaussian ambient vector projected to the tangent space at p, scaled by `scale`.
  Vec random_tangent(const VecRef& p, std::mt19937_64& rng, double scale = 1.0) const;

  /// Riemannian metric. Throws UsageError unless both vectors are attached at p.
  double inner(const VecRef& p, const TangentVector& u, const TangentVector& v) const;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

class Euclidean final : public Manifold {
 public:
  explicit Euclidean(int dim);

  ManifoldKind kind() const override { return ManifoldKind::euclidean; }
  std::string id() const override;
  int ambient_dim() const override { return dim_; }
  int dim() const override { return dim_; }
  bool compact() const override { return false; }
  double injectivity_radius() const override;

  Vec exp(const VecRef& p, const VecRef& v) const override;
  Vec log(const VecRef& p, const VecRef& q) const override;
  Vec transport(const VecRef& p, const VecRef& q, const VecRef& u) const override;
  Vec project_tangent(const VecRef& p, const VecRef& a) const override;
  double dist(const VecRef& p, const VecRef& q) const override;
  Vec projection_pullback(const VecRef& p, const VecRef& a, const VecRef& g) const override;
  Vec canonicalize(const VecRef& p) const override;
  double constraint_residual(const VecRef& p) const override;
  double tangent_residual(const VecRef& p, const VecRef& v) const override;
  bool near_cut_locus(const VecRef& p, const VecRef& q) const override;
  Vec base_point() const override;
  Vec random_point(std::mt19937_64& rng) const override;

 private:
  int dim_;
};

/// Unit sphere S^d in R^{d+1}.
class Sphere final : public Manifold {
 public:
  explicit Sphere(int dim);

  ManifoldKind kind() const override { return ManifoldKind::sphere; }
  std::string id() const override;
  int ambient_dim() const override { return dim_ + 1; }
  int dim() const override { return dim_; }
  bool compact() const override { return true; }
  double injectivity_radius() const override;

  Vec exp(const VecRef& p, const VecRef& v) const override;
  Vec log(const VecRef& p, const VecRef& q) const override;
  Vec transport(const VecRef& p, const VecRef& q, const VecRef& u) const override;
  Vec project_tangent(const VecRef& p, const VecRef& a) const override;
  double dist(const VecRef& p, const VecRef& q) const override;
  Vec projection_pullback(const VecRef& p, const VecRef& a, const VecRef& g) const override;
  Vec canonicalize(const VecRef& p) const override;
  double constraint_residual(const VecRef& p) const override;
  double tangent_residual(const VecRef& p, const VecRef& v) const override;
  bool near_cut_locus(const VecRef& p, const VecRef& q) const override;
  Vec base_point() const override;
  Vec random_point(std::mt19937_64& rng) const override;

 private:
  int dim_;
};

/// Flat torus R^d / (2pi Z)^d with coordinates kept in [0, 2pi). d = 1 is the circle.
class Torus final : public Manifold {
 public:
  explicit Torus(int dim);

  ManifoldKind kind() const override { return ManifoldKind::torus; }
  std::string id() const override;
  int ambient_dim() const override { return dim_; }
  int dim() const override { return dim_; }
  bool compact() const override { return true; }
  double injectivity_radius() const override;

  Vec exp(const VecRef& p, const VecRef& v) const override;
  Vec log(const VecRef& p, const VecRef& q) const override;
  Vec transport(const VecRef& p, const VecRef& q, const VecRef& u) const override;
  Vec project_tangent(const VecRef& p, const VecRef& a) const override;
  double dist(const VecRef& p, const VecRef& q) const override;
  Vec difference(const VecRef& p, const VecRef& q) const override;
  Vec projection_pullback(const VecRef& p, const VecRef& a, const VecRef& g) const override;
  Vec canonicalize(const VecRef& p) const override;
  double constraint_residual(const VecRef& p) const override;
  double tangent_residual(const VecRef& p, const VecRef& v) const override;
  bool near_cut_locus(const VecRef& p, const VecRef& q) const override;
  Vec base_point() const override;
  Vec random_point(std::mt19937_64& rng) const override;

  /// Reduce an angle to [0, 2pi).
  static double wrap(double angle);
  /// Minimal representative of an angular displacement, in [-pi, pi].
  static double wrap_symmetric(double angle);

 private:
  int dim_;
};

/// Rotation group as row-major 3x3 matrices in R^9, Frobenius metric.
class SO3 final : public Manifold {
 public:
  ManifoldKind kind() const override { return ManifoldKind::so3; }
  std::string id() const override { return "so3"; }
  int ambient_dim() const override { return 9; }
  int dim() const override { return 3; }
  bool compact() const override { return true; }
  double injectivity_radius() const override;

  Vec exp(const VecRef& p, const VecRef& v) const override;
  Vec log(const VecRef& p, const VecRef& q) const override;
  Vec transport(const VecRef& p, const VecRef& q, const VecRef& u) const override;
  Vec project_tangent(const VecRef& p, const VecRef& a) const override;
  double dist(const VecRef& p, const VecRef& q) const override;
  Vec projection_pullback(const VecRef& p, const VecRef& a, const VecRef& g) const override;
  Vec canonicalize(const VecRef& p) const override;
  double constraint_residual(const VecRef& p) const override;
  double tangent_residual(const VecRef& p, const VecRef& v) const override;
  bool near_cut_locus(const VecRef& p, const VecRef& q) const override;
  Vec base_point() const override;
  Vec random_point(std::mt19937_64& rng) const override;

  static Eigen::Matrix3d to_matrix(const VecRef& v);
  static Vec from_matrix(const Eigen::Matrix3d& m);
  static Eigen::Matrix3d hat(const Eigen::Vector3d& axis);
  static Eigen::Vector3d vee(const Eigen::Matrix3d& skew);
  /// Rodrigues formula for a skew-symmetric argument.
  static Eigen::Matrix3d expm(const Eigen::Matrix3d& skew);
  /// Principal logarithm of a rotation; rotation angle must stay below pi - kCutLocusTolerance.
  static Eigen::Matrix3d logm(const Eigen::Matrix3d& rotation);
  /// Nearest rotation in Frobenius norm (polar factor with det = +1).
  static Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m);
  static double rotation_angle(const Eigen::Matrix3d& rotation);
};

/// Parse "euclidean:d", "sphere:d", "torus:d", "circle" or "so3". Throws ConfigError.
ManifoldPtr make_manifold(std::string_view id);

}  // namespace varcurve
