#include "varcurve/curve.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "varcurve/error.hpp"

namespace varcurve {

const char* to_string(DomainKind kind) { return kind == DomainKind::interval ? "interval" : "circle"; }

DomainKind domain_from_string(std::string_view name) {
  if (name == "interval") return DomainKind::interval;
  if (name == "circle") return DomainKind::circle;
  throw ConfigError("unknown domain kind '" + std::string(name) + "'");
}

DiscreteCurve::DiscreteCurve(ManifoldPtr manifold, DomainKind domain, Eigen::MatrixXd samples)
    : manifold_(std::move(manifold)), domain_(domain), samples_(std::move(samples)) {
  if (!manifold_) throw UsageError("curve: null manifold");
  n_ = domain_ == DomainKind::interval ? static_cast<int>(samples_.cols()) - 1
                                       : static_cast<int>(samples_.cols());
  if (n_ < 4) throw UsageError("curve: grid size N must be >= 4");
  if (samples_.rows() != manifold_->ambient_dim()) {
    throw UsageError("curve: sample dimension does not match manifold " + manifold_->id());
  }
  for (int j = 0; j < samples_.cols(); ++j) {
    if (!(manifold_->constraint_residual(samples_.col(j)) <= 1e-9)) {
      throw UsageError("curve: sample " + std::to_string(j) + " is not on " + manifold_->id());
    }
  }
}

DiscreteCurve DiscreteCurve::sample(ManifoldPtr manifold, DomainKind domain, int n,
                                    const std::function<Vec(double)>& fn) {
  if (n < 4) throw UsageError("curve: grid size N must be >= 4");
  const int count = domain == DomainKind::interval ? n + 1 : n;
  Eigen::MatrixXd s(manifold->ambient_dim(), count);
  for (int j = 0; j < count; ++j) {
    s.col(j) = manifold->canonicalize(fn(static_cast<double>(j) / n));
  }
  return DiscreteCurve(std::move(manifold), domain, std::move(s));
}

DiscreteCurve DiscreteCurve::constant(ManifoldPtr manifold, DomainKind domain, int n,
                                      const VecRef& point) {
  const Vec p = point;
  return sample(std::move(manifold), domain, n, [&](double) { return p; });
}

int DiscreteCurve::index(int j) const {
  if (domain_ == DomainKind::circle) {
    const int m = j % n_;
    return m < 0 ? m + n_ : m;
  }
  if (j < 0 || j > n_) throw UsageError("curve: sample index out of range");
  return j;
}

void DiscreteCurve::set_sample(int j, const VecRef& point) { samples_.col(index(j)) = point; }

TangentField::TangentField(DiscreteCurve curve, Eigen::MatrixXd vecs)
    : base(std::move(curve)), vectors(std::move(vecs)) {
  if (vectors.cols() != base.sample_count() || vectors.rows() != base.manifold().ambient_dim()) {
    throw UsageError("tangent field: shape does not match base curve");
  }
}

TangentField TangentField::zeros(const DiscreteCurve& curve) {
  return TangentField(curve, Eigen::MatrixXd::Zero(curve.manifold().ambient_dim(), curve.sample_count()));
}

void check_spacing(const DiscreteCurve& x) {
  const Manifold& m = x.manifold();
  for (int j = 0; j < x.segment_count(); ++j) {
    if (m.near_cut_locus(x.sample(j), x.sample(j + 1))) {
      throw DegenerateCurveError(static_cast<std::size_t>(j), "consecutive samples at the cut locus");
    }
  }
}

Eigen::MatrixXd segment_differences(const DiscreteCurve& x) {
  check_spacing(x);
  const Manifold& m = x.manifold();
  Eigen::MatrixXd d(m.ambient_dim(), x.segment_count());
  for (int j = 0; j < x.segment_count(); ++j) d.col(j) = m.difference(x.sample(j), x.sample(j + 1));
  return d;
}

TangentField velocity(const DiscreteCurve& x) {
  const Eigen::MatrixXd d = segment_differences(x);
  const Manifold& m = x.manifold();
  const int n = x.grid_size();
  const double scale = 0.5 * n;
  Eigen::MatrixXd v(m.ambient_dim(), x.sample_count());
  if (x.domain() == DomainKind::circle) {
    for (int j = 0; j < n; ++j) {
      v.col(j) = m.project_tangent(x.sample(j), scale * (d.col((j + n - 1) % n) + d.col(j)));
    }
  } else {
    v.col(0) = m.project_tangent(x.sample(0), scale * (3.0 * d.col(0) - d.col(1)));
    for (int j = 1; j < n; ++j) {
      v.col(j) = m.project_tangent(x.sample(j), scale * (d.col(j - 1) + d.col(j)));
    }
    v.col(n) = m.project_tangent(x.sample(n), scale * (3.0 * d.col(n - 1) - d.col(n - 2)));
  }
  return TangentField(x, std::move(v));
}

TangentField covariant_accel(const DiscreteCurve& x) {
  const Eigen::MatrixXd d = segment_differences(x);
  const Manifold& m = x.manifold();
  const int n = x.grid_size();
  const double scale = static_cast<double>(n) * n;
  Eigen::MatrixXd a(m.ambient_dim(), x.sample_count());
  if (x.domain() == DomainKind::circle) {
    for (int j = 0; j < n; ++j) {
      a.col(j) = m.project_tangent(x.sample(j), scale * (d.col(j) - d.col((j + n - 1) % n)));
    }
  } else {
    a.col(0) = m.project_tangent(x.sample(0), scale * (-2.0 * d.col(0) + 3.0 * d.col(1) - d.col(2)));
    for (int j = 1; j < n; ++j) {
      a.col(j) = m.project_tangent(x.sample(j), scale * (d.col(j) - d.col(j - 1)));
    }
    a.col(n) = m.project_tangent(x.sample(n),
                                 scale * (2.0 * d.col(n - 1) - 3.0 * d.col(n - 2) + d.col(n - 3)));
  }
  return TangentField(x, std::move(a));
}

namespace {

// First derivative of per-sample ambient data by central differences (one-sided at interval ends).
Eigen::MatrixXd ambient_derivative(const Eigen::MatrixXd& f, DomainKind domain, int n) {
  Eigen::MatrixXd out(f.rows(), f.cols());
  const double scale = 0.5 * n;
  if (domain == DomainKind::circle) {
    for (int j = 0; j < n; ++j) out.col(j) = scale * (f.col((j + 1) % n) - f.col((j + n - 1) % n));
  } else {
    out.col(0) = scale * (-3.0 * f.col(0) + 4.0 * f.col(1) - f.col(2));
    for (int j = 1; j < n; ++j) out.col(j) = scale * (f.col(j + 1) - f.col(j - 1));
    out.col(n) = scale * (3.0 * f.col(n) - 4.0 * f.col(n - 1) + f.col(n - 2));
  }
  return out;
}

void require_order(int k) {
  if (k < 0 || k > 2) throw UsageError("sobolev order must be 0, 1 or 2");
}

}  // namespace

TangentField covariant_derivative(const TangentField& f) {
  const DiscreteCurve& x = f.base;
  const Eigen::MatrixXd raw = ambient_derivative(f.vectors, x.domain(), x.grid_size());
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (int j = 0; j < raw.cols(); ++j) out.col(j) = x.manifold().project_tangent(x.sample(j), raw.col(j));
  return TangentField(x, std::move(out));
}

Eigen::VectorXd trapezoid_weights(int sample_count, DomainKind domain) {
  if (domain == DomainKind::circle) return Eigen::VectorXd::Constant(sample_count, 1.0 / sample_count);
  const double h = 1.0 / (sample_count - 1);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(sample_count, h);
  w[0] = w[sample_count - 1] = 0.5 * h;
  return w;
}

double sobolev_norm_sq(const TangentField& f, int k) {
  require_order(k);
  const Eigen::VectorXd w = trapezoid_weights(f.size(), f.base.domain());
  double total = 0.0;
  TangentField current = f;
  for (int order = 0; order <= k; ++order) {
    if (order > 0) current = covariant_derivative(current);
    total += w.dot(current.vectors.colwise().squaredNorm().transpose());
  }
  return total;
}

double sup_norm(const TangentField& f, int k) {
  require_order(k);
  Eigen::VectorXd pointwise = f.vectors.colwise().norm().transpose();
  TangentField current = f;
  for (int order = 1; order <= k; ++order) {
    current = covariant_derivative(current);
    pointwise += current.vectors.colwise().norm().transpose();
  }
  return pointwise.maxCoeff();
}

double length(const DiscreteCurve& x) {
  double total = 0.0;
  for (int j = 0; j < x.segment_count(); ++j) total += x.manifold().dist(x.sample(j), x.sample(j + 1));
  return total;
}

double speed_norm_sq(const DiscreteCurve& x) {
  double total = 0.0;
  for (int j = 0; j < x.segment_count(); ++j) {
    const double d = x.manifold().dist(x.sample(j), x.sample(j + 1));
    total += d * d;
  }
  return total * x.grid_size();
}

double sup_speed(const DiscreteCurve& x) { return velocity(x).vectors.colwise().norm().maxCoeff(); }

namespace {

void require_compatible(const DiscreteCurve& x, const DiscreteCurve& y) {
  if (x.manifold().id() != y.manifold().id() || x.domain() != y.domain() ||
      x.grid_size() != y.grid_size()) {
    throw UsageError("curves live on different manifolds, domains or grids");
  }
}

}  // namespace

double sup_distance(const DiscreteCurve& x, const DiscreteCurve& y) {
  require_compatible(x, y);
  double best = 0.0;
  for (int j = 0; j < x.sample_count(); ++j) {
    best = std::max(best, x.manifold().dist(x.sample(j), y.sample(j)));
  }
  return best;
}

double h2_distance(const DiscreteCurve& x, const DiscreteCurve& y) {
  require_compatible(x, y);
  Eigen::MatrixXd e(x.manifold().ambient_dim(), x.sample_count());
  for (int j = 0; j < x.sample_count(); ++j) e.col(j) = x.manifold().difference(x.sample(j), y.sample(j));
  const Eigen::VectorXd w = trapezoid_weights(x.sample_count(), x.domain());
  const Eigen::MatrixXd de = ambient_derivative(e, x.domain(), x.grid_size());
  const Eigen::MatrixXd dde = ambient_derivative(de, x.domain(), x.grid_size());
  const double total = w.dot(e.colwise().squaredNorm().transpose()) +
                       w.dot(de.colwise().squaredNorm().transpose()) +
                       w.dot(dde.colwise().squaredNorm().transpose());
  return std::sqrt(total);
}

Vec lifted_displacement(const DiscreteCurve& x) {
  if (x.manifold().kind() != ManifoldKind::torus) {
    throw UsageError("winding numbers are defined for torus curves only");
  }
  Vec total = Vec::Zero(x.manifold().ambient_dim());
  for (int j = 0; j < x.segment_count(); ++j) total += x.manifold().difference(x.sample(j), x.sample(j + 1));
  return total;
}

std::vector<int> winding_numbers(const DiscreteCurve& x) {
  Vec lifted = lifted_displacement(x);
  if (x.domain() == DomainKind::interval) {
    lifted -= x.manifold().difference(x.sample(0), x.sample(x.grid_size()));
  }
  std::vector<int> w(static_cast<std::size_t>(lifted.size()));
  for (Eigen::Index i = 0; i < lifted.size(); ++i) {
    w[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(lifted[i] / (2.0 * std::numbers::pi)));
  }
  return w;
}

}  // namespace varcurve
