#include "varcurve/manifold.hpp"

#include <cmath>
#include <charconv>
#include <limits>
#include <numbers>

#include "varcurve/error.hpp"

namespace varcurve {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

void require_dim(const VecRef& v, int n, const char* what) {
  if (v.size() != n) {
    throw UsageError(std::string(what) + ": expected ambient dimension " + std::to_string(n) +
                     ", got " + std::to_string(v.size()));
  }
}

}  // namespace

Vec Manifold::random_tangent(const VecRef& p, std::mt19937_64& rng, double scale) const {
  return scale * project_tangent(p, gaussian(ambient_dim(), rng));
}

double Manifold::inner(const VecRef& p, const TangentVector& u, const TangentVector& v) const {
  constexpr double tol = 1e-12;
  if (u.base.size() != p.size() || v.base.size() != p.size() ||
      (u.base - p).lpNorm<Eigen::Infinity>() > tol || (v.base - p).lpNorm<Eigen::Infinity>() > tol) {
    throw UsageError("inner: tangent vectors are not attached at the given point");
  }
  require_dim(u.components, ambient_dim(), "inner");
  require_dim(v.components, ambient_dim(), "inner");
  return u.components.dot(v.components);
}

// ---------------------------------------------------------------------------
// Euclidean

Euclidean::Euclidean(int dim) : dim_(dim) {
  if (dim < 1) throw ConfigError("euclidean dimension must be >= 1");
}

std::string Euclidean::id() const { return "euclidean:" + std::to_string(dim_); }
double Euclidean::injectivity_radius() const { return std::numeric_limits<double>::infinity(); }
Vec Euclidean::exp(const VecRef& p, const VecRef& v) const { return p + v; }
Vec Euclidean::log(const VecRef& p, const VecRef& q) const { return q - p; }
Vec Euclidean::transport(const VecRef&, const VecRef&, const VecRef& u) const { return u; }
Vec Euclidean::project_tangent(const VecRef&, const VecRef& a) const { return a; }
double Euclidean::dist(const VecRef& p, const VecRef& q) const { return (q - p).norm(); }
Vec Euclidean::projection_pullback(const VecRef& p, const VecRef&, const VecRef&) const {
  return Vec::Zero(p.size());
}
Vec Euclidean::canonicalize(const VecRef& p) const { return p; }
double Euclidean::constraint_residual(const VecRef& p) const { return p.allFinite() ? 0.0 : 1.0; }
double Euclidean::tangent_residual(const VecRef&, const VecRef&) const { return 0.0; }
bool Euclidean::near_cut_locus(const VecRef&, const VecRef&) const { return false; }
Vec Euclidean::base_point() const { return Vec::Zero(dim_); }
Vec Euclidean::random_point(std::mt19937_64& rng) const { return gaussian(dim_, rng); }

// ---------------------------------------------------------------------------
// Sphere

Sphere::Sphere(int dim) : dim_(dim) {
  if (dim < 1) throw ConfigError("sphere dimension must be >= 1");
}

std::string Sphere::id() const { return "sphere:" + std::to_string(dim_); }
double Sphere::injectivity_radius() const { return kPi; }

Vec Sphere::exp(const VecRef& p, const VecRef& v) const {
  const double theta = v.norm();
  // sin(theta)/theta, series below 1e-4 keeps full precision
  const double sinc = theta < 1e-4 ? 1.0 - theta * theta / 6.0 : std::sin(theta) / theta;
  Vec q = std::cos(theta) * p + sinc * v;
  return q / q.norm();
}

namespace {

// Component of q orthogonal to p, computed from q - p to avoid cancellation for nearby points.
Vec sphere_normal_part(const VecRef& p, const VecRef& q) {
  Vec d = q - p;
  return d - d.dot(p) * p;
}

}  // namespace

Vec Sphere::log(const VecRef& p, const VecRef& q) const {
  const Vec u = sphere_normal_part(p, q);
  const double s = u.norm();
  const double theta = std::atan2(s, p.dot(q));
  if (kPi - theta < kCutLocusTolerance) {
    throw CutLocusError("sphere log: points are antipodal");
  }
  if (s == 0.0) return Vec::Zero(p.size());
  return (theta / s) * u;
}

Vec Sphere::transport(const VecRef& p, const VecRef& q, const VecRef& u) const {
  const Vec v = log(p, q);
  const double theta = v.norm();
  if (theta == 0.0) return u;
  const Vec e = v / theta;
  const double along = e.dot(u);
  Vec out = u + along * ((std::cos(theta) - 1.0) * e - std::sin(theta) * p);
  return project_tangent(q, out);
}

Vec Sphere::project_tangent(const VecRef& p, const VecRef& a) const { return a - p.dot(a) * p; }

double Sphere::dist(const VecRef& p, const VecRef& q) const {
  return std::atan2(sphere_normal_part(p, q).norm(), p.dot(q));
}

Vec Sphere::projection_pullback(const VecRef& p, const VecRef& a, const VecRef& g) const {
  return -p.dot(g) * a - p.dot(a) * g;
}

Vec Sphere::canonicalize(const VecRef& p) const { return p / p.norm(); }
double Sphere::constraint_residual(const VecRef& p) const { return std::abs(p.norm() - 1.0); }
double Sphere::tangent_residual(const VecRef& p, const VecRef& v) const { return std::abs(p.dot(v)); }

bool Sphere::near_cut_locus(const VecRef& p, const VecRef& q) const {
  return kPi - dist(p, q) < kCutLocusTolerance;
}

Vec Sphere::base_point() const {
  Vec p = Vec::Zero(dim_ + 1);
  p[0] = 1.0;
  return p;
}

Vec Sphere::random_point(std::mt19937_64& rng) const {
  Vec g = gaussian(dim_ + 1, rng);
  return g / g.norm();
}

// ---------------------------------------------------------------------------
// Torus

Torus::Torus(int dim) : dim_(dim) {
  if (dim < 1) throw ConfigError("torus dimension must be >= 1");
}

std::string Torus::id() const { return "torus:" + std::to_string(dim_); }
double Torus::injectivity_radius() const { return kPi; }

double Torus::wrap(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double Torus::wrap_symmetric(double angle) { return angle - kTwoPi * std::round(angle / kTwoPi); }

Vec Torus::exp(const VecRef& p, const VecRef& v) const {
  Vec q(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) q[i] = wrap(p[i] + v[i]);
  return q;
}

Vec Torus::log(const VecRef& p, const VecRef& q) const {
  if (near_cut_locus(p, q)) throw CutLocusError("torus log: an angular displacement equals pi");
  return difference(p, q);
}

Vec Torus::transport(const VecRef&, const VecRef&, const VecRef& u) const { return u; }
Vec Torus::project_tangent(const VecRef&, const VecRef& a) const { return a; }
double Torus::dist(const VecRef& p, const VecRef& q) const { return difference(p, q).norm(); }

Vec Torus::difference(const VecRef& p, const VecRef& q) const {
  Vec d(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) d[i] = wrap_symmetric(q[i] - p[i]);
  return d;
}

Vec Torus::projection_pullback(const VecRef& p, const VecRef&, const VecRef&) const {
  return Vec::Zero(p.size());
}

Vec Torus::canonicalize(const VecRef& p) const {
  Vec q(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) q[i] = wrap(p[i]);
  return q;
}

double Torus::constraint_residual(const VecRef& p) const {
  double r = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i])) return 1.0;
    if (p[i] < 0.0) r = std::max(r, -p[i]);
    if (p[i] >= kTwoPi) r = std::max(r, p[i] - kTwoPi + std::numeric_limits<double>::epsilon());
  }
  return r;
}

double Torus::tangent_residual(const VecRef&, const VecRef&) const { return 0.0; }

bool Torus::near_cut_locus(const VecRef& p, const VecRef& q) const {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (kPi - std::abs(wrap_symmetric(q[i] - p[i])) < kCutLocusTolerance) return true;
  }
  return false;
}

Vec Torus::base_point() const { return Vec::Zero(dim_); }

Vec Torus::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  Vec p(dim_);
  for (int i = 0; i < dim_; ++i) p[i] = wrap(angle(rng));
  return p;
}

// ---------------------------------------------------------------------------

namespace {

int parse_dim(std::string_view id, std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || value < 1) {
    throw ConfigError("bad manifold dimension in '" + std::string(id) + "'");
  }
  return value;
}

}  // namespace

ManifoldPtr make_manifold(std::string_view id) {
  if (id == "so3") return std::make_shared<SO3>();
  if (id == "circle") return std::make_shared<Torus>(1);
  const auto colon = id.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("unknown manifold id '" + std::string(id) + "'");
  }
  const auto name = id.substr(0, colon);
  const int dim = parse_dim(id, id.substr(colon + 1));
  if (name == "euclidean") return std::make_shared<Euclidean>(dim);
  if (name == "sphere") return std::make_shared<Sphere>(dim);
  if (name == "torus") return std::make_shared<Torus>(dim);
  throw ConfigError("unknown manifold id '" + std::string(id) + "'");
}

}  // namespace varcurve
