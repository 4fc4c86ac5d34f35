#include "varcurve/vectorfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varcurve/error.hpp"

namespace varcurve {

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::zero: return "zero";
    case FieldKind::constant_ambient: return "constant_ambient";
    case FieldKind::sphere_rotation: return "sphere_rotation";
    case FieldKind::so3_left_invariant: return "so3_left_invariant";
    case FieldKind::torus_constant: return "torus_constant";
  }
  return "?";
}

FieldKind field_kind_from_string(std::string_view name) {
  for (auto k : {FieldKind::zero, FieldKind::constant_ambient, FieldKind::sphere_rotation,
                 FieldKind::so3_left_invariant, FieldKind::torus_constant}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown field kind '" + std::string(name) + "'");
}

PriorField PriorField::zero() { return PriorField{}; }

PriorField PriorField::constant_ambient(Vec c) {
  PriorField f;
  f.kind_ = FieldKind::constant_ambient;
  f.params_ = std::move(c);
  return f;
}

PriorField PriorField::sphere_rotation(const Eigen::Vector3d& axis) {
  PriorField f;
  f.kind_ = FieldKind::sphere_rotation;
  f.params_ = axis;
  return f;
}

PriorField PriorField::so3_left_invariant(const Eigen::Matrix3d& skew) {
  if ((skew + skew.transpose()).norm() > 1e-12) {
    throw ConfigError("so3_left_invariant field needs a skew-symmetric matrix");
  }
  PriorField f;
  f.kind_ = FieldKind::so3_left_invariant;
  f.params_ = SO3::from_matrix(skew);
  return f;
}

PriorField PriorField::torus_constant(Vec c) {
  PriorField f;
  f.kind_ = FieldKind::torus_constant;
  f.params_ = std::move(c);
  return f;
}

PriorField PriorField::from_params(FieldKind kind, const std::vector<double>& params) {
  const Vec v = Eigen::Map<const Vec>(params.data(), static_cast<Eigen::Index>(params.size()));
  switch (kind) {
    case FieldKind::zero:
      return zero();
    case FieldKind::constant_ambient:
      if (params.empty()) throw ConfigError("constant_ambient field needs a vector");
      return constant_ambient(v);
    case FieldKind::sphere_rotation:
      if (params.size() != 3) throw ConfigError("sphere_rotation field needs a 3-vector axis");
      return sphere_rotation(v);
    case FieldKind::so3_left_invariant:
      if (params.size() == 3) return so3_left_invariant(SO3::hat(v));
      if (params.size() != 9) throw ConfigError("so3_left_invariant field needs 3 (axis) or 9 (matrix) params");
      return so3_left_invariant(SO3::to_matrix(v));
    case FieldKind::torus_constant:
      if (params.empty()) throw ConfigError("torus_constant field needs a vector");
      return torus_constant(v);
  }
  throw ConfigError("unknown field kind");
}

PriorField PriorField::with_modulation(std::vector<double> samples) const {
  PriorField f = *this;
  if (std::any_of(samples.begin(), samples.end(), [](double s) { return !std::isfinite(s); })) {
    throw ConfigError("field modulation samples must be finite");
  }
  f.modulation_ = std::move(samples);
  return f;
}

double PriorField::modulation(double t) const {
  if (modulation_.empty()) return 1.0;
  if (modulation_.size() == 1) return modulation_.front();
  const double pos = std::clamp(t, 0.0, 1.0) * static_cast<double>(modulation_.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), modulation_.size() - 2);
  const double frac = pos - static_cast<double>(i);
  return (1.0 - frac) * modulation_[i] + frac * modulation_[i + 1];
}

Vec PriorField::eval(const Manifold& m, double t, const VecRef& p) const {
  switch (kind_) {
    case FieldKind::zero:
      return Vec::Zero(p.size());
    case FieldKind::constant_ambient:
      return modulation(t) * m.project_tangent(p, params_);
    case FieldKind::sphere_rotation: {
      const Eigen::Vector3d w = params_.head<3>();
      const Eigen::Vector3d x = p.head<3>();
      return modulation(t) * w.cross(x);
    }
    case FieldKind::so3_left_invariant:
      return modulation(t) * SO3::from_matrix(SO3::to_matrix(p) * SO3::to_matrix(params_));
    case FieldKind::torus_constant:
      return modulation(t) * params_;
  }
  return Vec::Zero(p.size());
}

Vec PriorField::pullback(const Manifold& m, double t, const VecRef& p, const VecRef& g) const {
  switch (kind_) {
    case FieldKind::zero:
    case FieldKind::torus_constant:
      return Vec::Zero(p.size());
    case FieldKind::constant_ambient:
      return modulation(t) * m.projection_pullback(p, params_, g);
    case FieldKind::sphere_rotation: {
      // <g, w x p> = <p, g x w>
      const Eigen::Vector3d w = params_.head<3>();
      const Eigen::Vector3d gg = g.head<3>();
      return modulation(t) * Vec(gg.cross(w));
    }
    case FieldKind::so3_left_invariant:
      return modulation(t) *
             SO3::from_matrix(SO3::to_matrix(g) * SO3::to_matrix(params_).transpose());
  }
  return Vec::Zero(p.size());
}

double PriorField::bound() const {
  if (kind_ == FieldKind::zero) return 0.0;
  double mod = 1.0;
  if (!modulation_.empty()) {
    mod = 0.0;
    for (double s : modulation_) mod = std::max(mod, std::abs(s));
  }
  // |P c| <= |c|, |w x p| <= |w| on the unit sphere, |R W|_F = |W|_F.
  return mod * params_.norm();
}

double PriorField::validate(const Manifold& m, int draws, unsigned seed) const {
  switch (kind_) {
    case FieldKind::zero:
      break;
    case FieldKind::constant_ambient:
      if (params_.size() != m.ambient_dim()) {
        throw ConfigError("constant_ambient field dimension does not match " + m.id());
      }
      break;
    case FieldKind::sphere_rotation:
      if (m.kind() != ManifoldKind::sphere || m.ambient_dim() != 3) {
        throw ConfigError("sphere_rotation field requires sphere:2");
      }
      break;
    case FieldKind::so3_left_invariant:
      if (m.kind() != ManifoldKind::so3) throw ConfigError("so3_left_invariant field requires so3");
      break;
    case FieldKind::torus_constant:
      if (m.kind() != ManifoldKind::torus || params_.size() != m.ambient_dim()) {
        throw ConfigError("torus_constant field dimension does not match " + m.id());
      }
      break;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  const double b = bound();
  double observed = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Vec p = m.random_point(rng);
    const double n = eval(m, time(rng), p).norm();
    observed = std::max(observed, n);
  }
  if (observed > b * (1.0 + 1e-12) + 1e-15) {
    throw ConfigError("prior field exceeds its declared bound");
  }
  return observed;
}

}  // namespace varcurve
