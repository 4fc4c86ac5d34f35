#include "varcurve/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "varcurve/error.hpp"

namespace varcurve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_point(const Manifold& m, const Vec& p, const char* what) {
  if (p.size() != m.ambient_dim()) {
    throw ConfigError(std::string(what) + ": dimension does not match " + m.id());
  }
  if (!(m.constraint_residual(p) <= 1e-9)) {
    throw ConfigError(std::string(what) + ": point is not on " + m.id());
  }
}

void check_tangent(const Manifold& m, const Vec& p, const Vec& v, const char* what) {
  if (v.size() != m.ambient_dim()) {
    throw ConfigError(std::string(what) + ": dimension does not match " + m.id());
  }
  if (!(m.tangent_residual(p, v) <= 1e-9)) {
    throw ConfigError(std::string(what) + ": velocity is not tangent at its base point");
  }
}

}  // namespace

ConstraintSet ConstraintSet::clamped(int k, BoundaryData left, BoundaryData right) {
  if (k == 1) {
    if (left.velocity || right.velocity) throw ConfigError("clamped k=1 takes positions only");
  } else if (k == 2) {
    if (!left.velocity || !right.velocity) throw ConfigError("clamped k=2 needs velocities at both ends");
  } else {
    throw ConfigError("clamped order k must be 1 or 2");
  }
  return ConstraintSet(Clamped{k, std::move(left), std::move(right)});
}

ConstraintSet ConstraintSet::interpolation(std::vector<Knot> knots) {
  if (knots.empty()) throw ConfigError("interpolation needs at least one knot");
  std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) { return a.t < b.t; });
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i].t >= 0.0 && knots[i].t <= 1.0)) throw ConfigError("knot time outside [0, 1]");
    if (i > 0 && knots[i].t == knots[i - 1].t) throw ConfigError("knot times must be distinct");
  }
  return ConstraintSet(Interpolation{std::move(knots)});
}

ConstraintSet ConstraintSet::periodic() { return ConstraintSet(Periodic{}); }

bool ConstraintSet::supports(DomainKind domain) const {
  if (std::holds_alternative<Clamped>(kind_)) return domain == DomainKind::interval;
  if (std::holds_alternative<Periodic>(kind_)) return domain == DomainKind::circle;
  return true;
}

void ConstraintSet::validate(const Manifold& m) const {
  if (const auto* c = std::get_if<Clamped>(&kind_)) {
    check_point(m, c->left.position, "left boundary");
    check_point(m, c->right.position, "right boundary");
    if (c->left.velocity) check_tangent(m, c->left.position, *c->left.velocity, "left boundary");
    if (c->right.velocity) check_tangent(m, c->right.position, *c->right.velocity, "right boundary");
  } else if (const auto* in = std::get_if<Interpolation>(&kind_)) {
    for (const auto& k : in->knots) check_point(m, k.position, "knot");
  }
}

int knot_index(double t, int n, DomainKind domain) {
  const double pos = t * n;
  const double rounded = std::round(pos);
  if (std::abs(pos - rounded) > 1e-9) {
    throw ConfigError("knot time not on grid: t=" + std::to_string(t) + " with N=" + std::to_string(n));
  }
  int idx = static_cast<int>(rounded);
  if (domain == DomainKind::circle && idx == n) idx = 0;
  return idx;
}

namespace {

void require_domain(const ConstraintSet& c, DomainKind domain) {
  if (!c.supports(domain)) {
    throw ConfigError(std::string("constraint kind does not support the ") + to_string(domain) + " domain");
  }
}

// Fixed (index, point) pairs in increasing index order.
std::vector<std::pair<int, Vec>> anchors(const ConstraintSet& c, const Manifold& m, int n, DomainKind domain) {
  std::vector<std::pair<int, Vec>> out;
  if (const auto* cl = std::get_if<Clamped>(&c.kind())) {
    const Vec left = m.canonicalize(cl->left.position);
    const Vec right = m.canonicalize(cl->right.position);
    out.emplace_back(0, left);
    if (cl->k == 2) {
      const double limit = m.injectivity_radius() - kCutLocusTolerance;
      const Vec step_left = *cl->left.velocity / n;
      const Vec step_right = -*cl->right.velocity / n;
      if (!(step_left.norm() < limit) || !(step_right.norm() < limit)) {
        throw ConfigError("boundary velocity too large for one grid step");
      }
      out.emplace_back(1, m.exp(left, step_left));
      out.emplace_back(n - 1, m.exp(right, step_right));
    }
    out.emplace_back(n, right);
  } else if (const auto* in = std::get_if<Interpolation>(&c.kind())) {
    for (const auto& k : in->knots) {
      out.emplace_back(knot_index(k.t, n, domain), m.canonicalize(k.position));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (out[i].first == out[i - 1].first) throw ConfigError("two knots share a grid sample");
    }
  }
  return out;
}

}  // namespace

std::vector<bool> free_mask(const ConstraintSet& c, int n, DomainKind domain) {
  require_domain(c, domain);
  const int count = domain == DomainKind::interval ? n + 1 : n;
  std::vector<bool> mask(static_cast<std::size_t>(count), true);
  if (const auto* cl = std::get_if<Clamped>(&c.kind())) {
    mask.front() = mask.back() = false;
    if (cl->k == 2) mask[1] = mask[static_cast<std::size_t>(n - 1)] = false;
  } else if (const auto* in = std::get_if<Interpolation>(&c.kind())) {
    for (const auto& k : in->knots) mask[static_cast<std::size_t>(knot_index(k.t, n, domain))] = false;
  }
  return mask;
}

DiscreteCurve impose(const ConstraintSet& c, const DiscreteCurve& x) {
  require_domain(c, x.domain());
  DiscreteCurve out = x;
  for (const auto& [idx, point] : anchors(c, x.manifold(), x.grid_size(), x.domain())) {
    out.set_sample(idx, point);
  }
  return out;
}

namespace {

int hint_turns(const SeedHint& hint) {
  if (hint.winding.empty()) return 0;
  if (hint.winding.size() != 1) throw ConfigError("winding hint on this manifold is a single integer");
  return hint.winding.front();
}

// Tangent vector at p of the geodesic segment p -> q with the hint applied.
Vec segment_velocity(const Manifold& m, const Vec& p, const Vec& q, const SeedHint& hint) {
  switch (m.kind()) {
    case ManifoldKind::euclidean:
      if (hint_turns(hint) != 0 && !hint.winding.empty()) {
        throw ConfigError("euclidean space has no winding classes");
      }
      return q - p;
    case ManifoldKind::torus: {
      if (m.near_cut_locus(p, q) && hint.empty()) {
        throw ConfigError("segment endpoints are at the cut locus; requires explicit hint");
      }
      Vec delta = m.difference(p, q);
      if (!hint.winding.empty()) {
        if (static_cast<Eigen::Index>(hint.winding.size()) != delta.size()) {
          throw ConfigError("torus winding hint needs one integer per coordinate");
        }
        for (Eigen::Index i = 0; i < delta.size(); ++i) delta[i] += kTwoPi * hint.winding[static_cast<std::size_t>(i)];
      }
      return delta;
    }
    case ManifoldKind::sphere:
    case ManifoldKind::so3: {
      const int turns = hint_turns(hint);
      // Full turn length along a geodesic: 2pi on the sphere, 2pi sqrt(2) on SO(3).
      const double turn = m.kind() == ManifoldKind::sphere ? kTwoPi : kTwoPi * std::numbers::sqrt2;
      Vec v;
      bool degenerate = m.near_cut_locus(p, q);
      if (!degenerate) {
        v = m.log(p, q);
        degenerate = turns != 0 && v.norm() < 1e-12;
      }
      if (!degenerate) {
        if (turns == 0) return v;
        const double len = v.norm();
        return v * ((len + turns * turn) / len);
      }
      if (!hint.direction) {
        throw ConfigError("segment endpoints are equal or at the cut locus; requires explicit hint direction");
      }
      Vec e = m.project_tangent(p, *hint.direction);
      if (e.norm() < 1e-12) throw ConfigError("hint direction is normal to the manifold");
      e /= e.norm();
      const double base = m.near_cut_locus(p, q) ? m.dist(p, q) : 0.0;
      return e * (base + turns * turn);
    }
  }
  return q - p;
}

void fill_segment(const Manifold& m, Eigen::MatrixXd& s, int count, int from, int to, const Vec& p,
                  const Vec& v) {
  const int steps = to - from;
  for (int j = from; j <= to; ++j) {
    const double frac = static_cast<double>(j - from) / steps;
    s.col(j % count) = m.exp(p, frac * v);
  }
}

}  // namespace

DiscreteCurve seed(const ConstraintSet& c, ManifoldPtr mp, int n, const SeedHint& hint, DomainKind domain) {
  require_domain(c, domain);
  c.validate(*mp);
  const Manifold& m = *mp;
  const int count = domain == DomainKind::interval ? n + 1 : n;
  Eigen::MatrixXd s(m.ambient_dim(), count);
  const auto fixed = anchors(c, m, n, domain);

  if (fixed.empty()) {
    // Periodic: closed geodesic loop through the base point.
    const Vec p = m.base_point();
    Vec v = Vec::Zero(m.ambient_dim());
    if (!hint.winding.empty()) {
      if (m.kind() == ManifoldKind::torus) {
        v = segment_velocity(m, p, p, SeedHint{hint.winding, std::nullopt});
      } else if (m.kind() == ManifoldKind::euclidean) {
        segment_velocity(m, p, p, hint);
      } else {
        SeedHint h = hint;
        if (!h.direction) {
          Vec dir = Vec::Zero(m.ambient_dim());
          if (m.kind() == ManifoldKind::sphere) dir[1] = 1.0;
          else dir = SO3::from_matrix(SO3::hat(Eigen::Vector3d::UnitZ()));
          h.direction = dir;
        }
        v = segment_velocity(m, p, p, h);
      }
    }
    fill_segment(m, s, count, 0, n, p, v);
    return DiscreteCurve(std::move(mp), domain, std::move(s));
  }

  // Constant extension before the first and after the last anchor (interval only).
  if (domain == DomainKind::interval) {
    for (int j = 0; j <= fixed.front().first; ++j) s.col(j) = fixed.front().second;
    for (int j = fixed.back().first; j <= n; ++j) s.col(j) = fixed.back().second;
  }

  // Segment carrying the hint: middle one for clamped k=2, otherwise the first.
  std::size_t hinted = 0;
  if (const auto* cl = std::get_if<Clamped>(&c.kind()); cl && cl->k == 2) hinted = 1;

  std::size_t segments = fixed.size() - 1;
  if (domain == DomainKind::circle) segments = fixed.size();  // closing segment wraps around
  if (segments == 0 && !hint.winding.empty() &&
      std::any_of(hint.winding.begin(), hint.winding.end(), [](int w) { return w != 0; })) {
    throw ConfigError("a winding hint needs at least two fixed samples");
  }
  for (std::size_t i = 0; i < segments; ++i) {
    const auto& [from, p] = fixed[i];
    const auto& next = fixed[(i + 1) % fixed.size()];
    const int to = (i + 1 == fixed.size()) ? next.first + n : next.first;
    const SeedHint segment_hint = i == hinted ? hint : SeedHint{};
    fill_segment(m, s, count, from, to, p, segment_velocity(m, p, next.second, segment_hint));
  }
  for (const auto& [idx, p] : fixed) s.col(idx) = p;
  return DiscreteCurve(std::move(mp), domain, std::move(s));
}

}  // namespace varcurve
