#include <cmath>
#include <numbers>

#include "varcurve/error.hpp"
#include "varcurve/manifold.hpp"

namespace varcurve {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix3d skew_part(const Eigen::Matrix3d& m) { return 0.5 * (m - m.transpose()); }

}  // namespace

Eigen::Matrix3d SO3::to_matrix(const VecRef& v) {
  if (v.size() != 9) throw UsageError("so3: expected 9 row-major coordinates");
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = v[3 * r + c];
  return m;
}

Vec SO3::from_matrix(const Eigen::Matrix3d& m) {
  Vec v(9);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) v[3 * r + c] = m(r, c);
  return v;
}

Eigen::Matrix3d SO3::hat(const Eigen::Vector3d& w) {
  Eigen::Matrix3d s;
  s << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return s;
}

Eigen::Vector3d SO3::vee(const Eigen::Matrix3d& s) { return {s(2, 1), s(0, 2), s(1, 0)}; }

Eigen::Matrix3d SO3::expm(const Eigen::Matrix3d& skew) {
  const double theta = vee(skew).norm();
  double a, b;  // sin(t)/t, (1 - cos(t))/t^2
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Eigen::Matrix3d::Identity() + a * skew + b * skew * skew;
}

double SO3::rotation_angle(const Eigen::Matrix3d& r) {
  const double s = 0.5 * vee(r - r.transpose()).norm();
  const double c = 0.5 * (r.trace() - 1.0);
  return std::atan2(s, c);
}

Eigen::Matrix3d SO3::logm(const Eigen::Matrix3d& r) {
  const double theta = rotation_angle(r);
  if (kPi - theta < kCutLocusTolerance) {
    throw CutLocusError("so3 log: rotation angle equals pi");
  }
  if (theta < 1e-4) {
    return (1.0 + theta * theta / 6.0) * skew_part(r);
  }
  if (theta < 0.5 * kPi) {
    return (theta / std::sin(theta)) * skew_part(r);
  }
  // Near pi the skew part vanishes; recover the axis from the symmetric part.
  const double c = std::cos(theta);
  const Eigen::Matrix3d outer = (0.5 * (r + r.transpose()) - c * Eigen::Matrix3d::Identity()) / (1.0 - c);
  Eigen::Index k = 0;
  outer.diagonal().maxCoeff(&k);
  Eigen::Vector3d axis = outer.col(k) / std::sqrt(outer(k, k));
  if (axis.dot(vee(r - r.transpose())) < 0.0) axis = -axis;
  return hat(theta * axis.normalized());
}

Eigen::Matrix3d SO3::nearest_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) = -u.col(2);
  return u * v.transpose();
}

double SO3::injectivity_radius() const { return std::numbers::sqrt2 * kPi; }

Vec SO3::exp(const VecRef& p, const VecRef& v) const {
  const Eigen::Matrix3d r = to_matrix(p);
  const Eigen::Matrix3d omega = skew_part(r.transpose() * to_matrix(v));
  return from_matrix(nearest_rotation(r * expm(omega)));
}

Vec SO3::log(const VecRef& p, const VecRef& q) const {
  const Eigen::Matrix3d r = to_matrix(p);
  return from_matrix(r * logm(r.transpose() * to_matrix(q)));
}

Vec SO3::transport(const VecRef& p, const VecRef& q, const VecRef& u) const {
  const Eigen::Matrix3d r = to_matrix(p);
  const Eigen::Matrix3d omega = logm(r.transpose() * to_matrix(q));
  const Eigen::Matrix3d xi = skew_part(r.transpose() * to_matrix(u));
  const Eigen::Matrix3d half = expm(0.5 * omega);
  return project_tangent(q, from_matrix(r * half * xi * half));
}

Vec SO3::project_tangent(const VecRef& p, const VecRef& a) const {
  const Eigen::Matrix3d r = to_matrix(p);
  const Eigen::Matrix3d m = to_matrix(a);
  return from_matrix(0.5 * (m - r * m.transpose() * r));
}

double SO3::dist(const VecRef& p, const VecRef& q) const {
  return std::numbers::sqrt2 * rotation_angle(to_matrix(p).transpose() * to_matrix(q));
}

Vec SO3::projection_pullback(const VecRef& p, const VecRef& a, const VecRef& g) const {
  const Eigen::Matrix3d r = to_matrix(p);
  const Eigen::Matrix3d am = to_matrix(a);
  const Eigen::Matrix3d gm = to_matrix(g);
  return from_matrix(-0.5 * (gm * r.transpose() * am + am * r.transpose() * gm));
}

Vec SO3::canonicalize(const VecRef& p) const { return from_matrix(nearest_rotation(to_matrix(p))); }

double SO3::constraint_residual(const VecRef& p) const {
  const Eigen::Matrix3d r = to_matrix(p);
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).norm() + std::abs(r.determinant() - 1.0);
}

double SO3::tangent_residual(const VecRef& p, const VecRef& v) const {
  const Eigen::Matrix3d m = to_matrix(p).transpose() * to_matrix(v);
  return (m + m.transpose()).norm();
}

bool SO3::near_cut_locus(const VecRef& p, const VecRef& q) const {
  return kPi - rotation_angle(to_matrix(p).transpose() * to_matrix(q)) < kCutLocusTolerance;
}

Vec SO3::base_point() const { return from_matrix(Eigen::Matrix3d::Identity()); }

Vec SO3::random_point(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return from_matrix(q.toRotationMatrix());
}

}  // namespace varcurve
