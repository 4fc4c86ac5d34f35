#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "varcurve/curve.hpp"

namespace varcurve::testing {

inline constexpr double kPi = std::numbers::pi;

inline const std::vector<std::string>& manifold_ids() {
  static const std::vector<std::string> ids{"euclidean:2", "euclidean:3", "sphere:2", "sphere:3",
                                            "torus:1", "torus:2", "so3"};
  return ids;
}

/// The four manifold families at their headline dimensions.
inline const std::vector<std::string>& family_ids() {
  static const std::vector<std::string> ids{"euclidean:2", "sphere:2", "torus:2", "so3"};
  return ids;
}

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Tangent vector at p with norm exactly `norm`.
inline Vec tangent_of_norm(const Manifold& m, const VecRef& p, std::mt19937_64& rng, double norm) {
  Vec v = m.random_tangent(p, rng);
  while (v.norm() < 1e-6) v = m.random_tangent(p, rng);
  return v * (norm / v.norm());
}

/// Smooth random curve: exp at a random base of a few low-frequency tangent modes,
/// plus per-sample jitter of size `jitter`.
inline DiscreteCurve smooth_curve(const ManifoldPtr& m, DomainKind domain, int n, std::mt19937_64& rng,
                                  double amplitude = 0.4, double jitter = 1e-3) {
  const Vec base = m->random_point(rng);
  std::vector<Vec> modes;
  std::vector<double> phases;
  for (int k = 0; k < 3; ++k) {
    modes.push_back(m->random_tangent(base, rng, amplitude / (k + 1)));
    phases.push_back(uniform(rng, 0.0, 2.0 * kPi));
  }
  const double period = domain == DomainKind::circle ? 2.0 * kPi : kPi;
  DiscreteCurve x = DiscreteCurve::sample(m, domain, n, [&](double t) {
    Vec v = Vec::Zero(m->ambient_dim());
    for (int k = 0; k < 3; ++k) v += std::cos(period * (k + 1) * t + phases[static_cast<std::size_t>(k)]) * modes[static_cast<std::size_t>(k)];
    return m->exp(base, v);
  });
  if (jitter > 0.0) {
    for (int j = 0; j < x.sample_count(); ++j) x.set_sample(j, m->exp(x.sample(j), m->random_tangent(x.sample(j), rng, jitter)));
  }
  return x;
}

/// Random tangent field along x (one Gaussian tangent per sample).
inline Eigen::MatrixXd random_field(const DiscreteCurve& x, std::mt19937_64& rng, double scale = 1.0) {
  Eigen::MatrixXd f(x.manifold().ambient_dim(), x.sample_count());
  for (int j = 0; j < x.sample_count(); ++j) f.col(j) = x.manifold().random_tangent(x.sample(j), rng, scale);
  return f;
}

/// Exp-perturbation of every sample of x by eps * eta.
inline DiscreteCurve perturbed(const DiscreteCurve& x, const Eigen::MatrixXd& eta, double eps) {
  Eigen::MatrixXd s(x.manifold().ambient_dim(), x.sample_count());
  for (int j = 0; j < x.sample_count(); ++j) s.col(j) = x.manifold().exp(x.sample(j), eps * eta.col(j));
  return DiscreteCurve(x.manifold_ptr(), x.domain(), std::move(s));
}

}  // namespace varcurve::testing
