#include "varcurve/checks.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "varcurve/constraints.hpp"
#include "varcurve/error.hpp"
#include "varcurve/functionals.hpp"
#include "varcurve/optimizer.hpp"
#include "varcurve/oracle.hpp"

namespace varcurve::checks {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

CaseResult at_most(std::string id, double value, double limit, std::string detail = {}) {
  return {std::move(id), value <= limit, value, limit, std::move(detail)};
}

// Smooth random curve: exp of a low-frequency tangent field at a random base,
// plus a small per-sample jitter so no stencil is exact.
DiscreteCurve random_curve(const ManifoldPtr& m, DomainKind domain, int n, std::mt19937_64& rng) {
  const Vec base = m->random_point(rng);
  std::vector<Vec> modes;
  for (int k = 0; k < 3; ++k) modes.push_back(m->random_tangent(base, rng, 0.35 / (k + 1)));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  const double phases[3] = {phase(rng), phase(rng), phase(rng)};
  const double period = domain == DomainKind::circle ? 2.0 * kPi : kPi;
  DiscreteCurve x = DiscreteCurve::sample(m, domain, n, [&](double t) {
    Vec v = Vec::Zero(m->ambient_dim());
    for (int k = 0; k < 3; ++k) v += std::cos(period * (k + 1) * t + phases[k]) * modes[static_cast<std::size_t>(k)];
    return m->exp(base, v);
  });
  for (int j = 0; j < x.sample_count(); ++j) {
    x.set_sample(j, m->exp(x.sample(j), m->random_tangent(x.sample(j), rng, 2e-3)));
  }
  return x;
}

PriorField field_for(const Manifold& m) {
  switch (m.kind()) {
    case ManifoldKind::euclidean: {
      Vec c = Vec::LinSpaced(m.ambient_dim(), 0.5, 1.5);
      return PriorField::constant_ambient(c).with_modulation({1.0, 0.5, 1.5});
    }
    case ManifoldKind::sphere:
      if (m.ambient_dim() == 3) return PriorField::sphere_rotation(Eigen::Vector3d(0.3, -0.2, 1.0));
      return PriorField::constant_ambient(Vec::Ones(m.ambient_dim()));
    case ManifoldKind::torus:
      return PriorField::torus_constant(Vec::LinSpaced(m.ambient_dim(), 1.0, 2.0)).with_modulation({0.5, 1.0});
    case ManifoldKind::so3:
      return PriorField::so3_left_invariant(SO3::hat(Eigen::Vector3d(0.2, 0.7, -0.4)));
  }
  return PriorField::zero();
}

std::vector<std::pair<std::string, FunctionalSpec>> functional_matrix(const Manifold& m) {
  return {
      {"tension0", FunctionalSpec::tension(0.0)},
      {"tension", FunctionalSpec::tension(1.3)},
      {"conditional1", FunctionalSpec::conditional(1, field_for(m))},
      {"conditional2", FunctionalSpec::conditional(2, field_for(m))},
      {"energy1", FunctionalSpec::energy(1)},
      {"energy2", FunctionalSpec::energy(2)},
  };
}

DiscreteCurve perturb(const DiscreteCurve& x, const Eigen::MatrixXd& eta, double eps) {
  Eigen::MatrixXd s(x.manifold().ambient_dim(), x.sample_count());
  for (int j = 0; j < x.sample_count(); ++j) s.col(j) = x.manifold().exp(x.sample(j), eps * eta.col(j));
  return DiscreteCurve(x.manifold_ptr(), x.domain(), std::move(s));
}

SolveReport solve_from_seed(const FunctionalSpec& spec, const ConstraintSet& c, const ManifoldPtr& m, int n,
                            const SeedHint& hint = {}) {
  return minimize(spec, c, seed(c, m, n, hint), SolveOptions{});
}

ConvergenceStudy study(std::string id, bool position_only, double required,
                       const std::function<double(int)>& error_at) {
  ConvergenceStudy s;
  s.id = std::move(id);
  s.position_only = position_only;
  s.required = required;
  for (int n : {25, 50, 100, 200}) {
    s.grid.push_back(n);
    s.error.push_back(error_at(n));
  }
  s.order = fitted_order(s.grid, s.error);
  return s;
}

}  // namespace

bool SuiteResult::passed() const { return failures() == 0; }

int SuiteResult::failures() const {
  int f = 0;
  for (const auto& c : cases) f += c.passed ? 0 : 1;
  return f;
}

double fitted_order(const std::vector<int>& grid, const std::vector<double>& error) {
  const std::size_t n = grid.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(static_cast<double>(grid[i]));
    const double y = -std::log(error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

SuiteResult gradient_suite(double tolerance, double epsilon) {
  SuiteResult r{"gradient", {}};
  std::mt19937_64 rng(20240611);
  for (const char* id : {"euclidean:2", "sphere:2", "torus:2", "so3"}) {
    const ManifoldPtr m = make_manifold(id);
    for (const auto& [name, spec] : functional_matrix(*m)) {
      for (int trial = 0; trial < 3; ++trial) {
        const DomainKind domain = trial == 2 ? DomainKind::circle : DomainKind::interval;
        const DiscreteCurve x = random_curve(m, domain, 40, rng);
        Eigen::MatrixXd eta(m->ambient_dim(), x.sample_count());
        for (int j = 0; j < x.sample_count(); ++j) eta.col(j) = m->random_tangent(x.sample(j), rng);
        const std::vector<bool> free(static_cast<std::size_t>(x.sample_count()), true);
        const TangentField g = gradient(spec, x, free);
        const double analytic = (g.vectors.array() * eta.array()).sum();
        const double fd =
            (evaluate(spec, perturb(x, eta, epsilon)) - evaluate(spec, perturb(x, eta, -epsilon))) / (2.0 * epsilon);
        const double rel = std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-300);
        r.cases.push_back(at_most(std::string(id) + "/" + name + "/" + to_string(domain) + "#" + std::to_string(trial),
                                  rel, tolerance, fmt("fd=%.10g analytic=%.10g", fd, analytic)));
      }
    }
  }
  return r;
}

std::vector<ConvergenceStudy> convergence_studies() {
  std::vector<ConvergenceStudy> out;
  const Vec zero1 = Vec::Zero(1);
  auto scalar = [](double v) { return Vec::Constant(1, v); };

  // Natural tension spline through three knots on the line.
  {
    const double tau = 1.0;
    const auto exact = oracle::tension_spline({0.0, 0.4, 1.0}, {scalar(0.0), scalar(1.0), scalar(0.0)}, tau);
    const ManifoldPtr m = make_manifold("euclidean:1");
    const auto c = ConstraintSet::interpolation({{0.0, scalar(0.0)}, {0.4, scalar(1.0)}, {1.0, scalar(0.0)}});
    out.push_back(study("euclidean:1/tension/knots", true, 1.8, [&](int n) {
      const auto rep = solve_from_seed(FunctionalSpec::tension(tau), c, m, n);
      return sup_distance(rep.minimizer, exact.sample(m, DomainKind::interval, n));
    }));
  }
  // Same problem lifted to the circle, wrapping past 2 pi.
  {
    const double tau = 2.0;
    const std::vector<double> lifted{0.3, 2.5, 5.3};
    const auto exact = oracle::tension_spline({0.0, 0.4, 1.0}, {scalar(lifted[0]), scalar(lifted[1]), scalar(lifted[2])}, tau);
    const ManifoldPtr m = make_manifold("circle");
    const auto c = ConstraintSet::interpolation(
        {{0.0, scalar(lifted[0])}, {0.4, scalar(lifted[1])}, {1.0, scalar(lifted[2])}});
    out.push_back(study("circle/tension/knots", true, 1.8, [&](int n) {
      const auto rep = solve_from_seed(FunctionalSpec::tension(tau), c, m, n);
      return sup_distance(rep.minimizer, exact.sample(m, DomainKind::interval, n));
    }));
  }
  // Natural cubic spline (tau = 0) in the plane.
  {
    const Vec a = Vec::Zero(2), b = (Vec(2) << 1.0, 1.0).finished(), e = (Vec(2) << 0.0, 2.0).finished();
    const auto exact = oracle::tension_spline({0.0, 0.4, 1.0}, {a, b, e}, 0.0);
    const ManifoldPtr m = make_manifold("euclidean:2");
    const auto c = ConstraintSet::interpolation({{0.0, a}, {0.4, b}, {1.0, e}});
    out.push_back(study("euclidean:2/cubic/knots", true, 1.8, [&](int n) {
      const auto rep = solve_from_seed(FunctionalSpec::tension(0.0), c, m, n);
      return sup_distance(rep.minimizer, exact.sample(m, DomainKind::interval, n));
    }));
  }
  // Clamped k = 2: Hermite cubic and a clamped tension curve.
  {
    const auto exact = oracle::hermite_cubic(zero1, zero1, scalar(1.0), zero1);
    const ManifoldPtr m = make_manifold("euclidean:1");
    const auto c = ConstraintSet::clamped(2, {zero1, zero1}, {scalar(1.0), zero1});
    out.push_back(study("euclidean:1/cubic/clamped", false, 0.9, [&](int n) {
      const auto rep = solve_from_seed(FunctionalSpec::tension(0.0), c, m, n);
      return sup_distance(rep.minimizer, exact.sample(m, DomainKind::interval, n));
    }));
  }
  {
    const double tau = 3.0;
    const auto exact = oracle::tension_1d(zero1, scalar(1.0), scalar(1.0), scalar(-1.0), tau, oracle::EndCondition::clamped);
    const ManifoldPtr m = make_manifold("euclidean:1");
    const auto c = ConstraintSet::clamped(2, {zero1, scalar(1.0)}, {scalar(1.0), scalar(-1.0)});
    out.push_back(study("euclidean:1/tension/clamped", false, 0.9, [&](int n) {
      const auto rep = solve_from_seed(FunctionalSpec::tension(tau), c, m, n);
      return sup_distance(rep.minimizer, exact.sample(m, DomainKind::interval, n));
    }));
  }
  return out;
}

SuiteResult convergence_suite() {
  SuiteResult r{"convergence", {}};
  for (const auto& s : convergence_studies()) {
    std::string detail = s.position_only ? "position-only" : "clamped k=2";
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      detail += " N=" + std::to_string(s.grid[i]) + ":" + fmt("%.3e", s.error[i]);
    }
    r.cases.push_back({s.id, s.order >= s.required, s.order, s.required, detail});
  }
  return r;
}

SuiteResult oracle_suite() {
  SuiteResult r{"oracle", {}};
  const int n = 200;
  auto scalar = [](double v) { return Vec::Constant(1, v); };
  const Vec zero1 = Vec::Zero(1);
  auto relative = [](double got, double want) { return std::abs(got - want) / std::abs(want); };

  // Closed-form curves against the discrete functionals.
  {
    const auto h = oracle::hermite_cubic(zero1, zero1, scalar(1.0), zero1);
    const ManifoldPtr m = make_manifold("euclidean:1");
    const double want = oracle::tension_value(h, 0.0);
    const double got = evaluate(FunctionalSpec::tension(0.0), h.sample(m, DomainKind::interval, n));
    r.cases.push_back(at_most("hermite/tension0", relative(got, want), 0.02, fmt("discrete=%.10g exact=%.10g", got, want)));
  }
  for (double tau : {1.0, 5.0}) {
    const auto c = oracle::tension_1d(zero1, zero1, scalar(1.0), zero1, tau, oracle::EndCondition::clamped);
    const ManifoldPtr m = make_manifold("euclidean:1");
    const double want = oracle::tension_value(c, tau);
    const double got = evaluate(FunctionalSpec::tension(tau), c.sample(m, DomainKind::interval, n));
    r.cases.push_back(at_most(fmt("tension_1d/clamped/tau=%g", tau), relative(got, want), 0.02,
                              fmt("discrete=%.10g exact=%.10g", got, want)));
  }
  {
    const double tau = 2.0;
    const auto c = oracle::tension_1d(zero1, zero1, scalar(1.0), zero1, tau, oracle::EndCondition::position_only);
    double dev = 0.0;
    for (double t : {0.1, 0.37, 0.5, 0.81}) dev = std::max(dev, std::abs(c.eval(t)[0] - t));
    r.cases.push_back(at_most("tension_1d/position_only/line", dev, 1e-12));
  }
  {
    const auto c = oracle::tension_1d(zero1, zero1, scalar(1.0), zero1, 1e-3, oracle::EndCondition::clamped);
    const auto h = oracle::hermite_cubic(zero1, zero1, scalar(1.0), zero1);
    double dev = 0.0;
    for (double t = 0.0; t <= 1.0; t += 0.05) dev = std::max(dev, std::abs(c.eval(t)[0] - h.eval(t)[0]));
    r.cases.push_back(at_most("tension_1d/tau->0/hermite", dev, 1e-4));
  }
  {
    const Vec p = Vec::Zero(2), q = (Vec(2) << 2.0, 1.0).finished(), a = (Vec(2) << 1.0, 0.0).finished();
    const auto line = oracle::conditional_line(p, q, a);
    const ManifoldPtr m = make_manifold("euclidean:2");
    const double got =
        evaluate(FunctionalSpec::conditional(1, PriorField::constant_ambient(a)), line.curve.sample(m, DomainKind::interval, n));
    r.cases.push_back(at_most("conditional_line", relative(got, line.value), 0.02,
                              fmt("discrete=%.10g exact=%.10g", got, line.value)));
  }

  // Wrapped geodesics: tension value 1/2 tau^2 L^2, and the seed built by the manifold code.
  struct GeoCase {
    const char* id;
    Vec p, q;
    std::vector<int> winding;
  };
  const Vec r0 = SO3::from_matrix(Eigen::Matrix3d::Identity());
  const Vec r1 = SO3::from_matrix(SO3::expm(SO3::hat(Eigen::Vector3d(0.4, -1.1, 0.6))));
  const std::vector<GeoCase> geos{
      {"sphere:2", (Vec(3) << 1, 0, 0).finished(), (Vec(3) << 0, 1, 0).finished(), {1}},
      {"torus:2", (Vec(2) << 0.5, 6.0).finished(), (Vec(2) << 2.0, 0.2).finished(), {1, -1}},
      {"circle", scalar(0.0), scalar(kPi / 2), {-1}},
      {"so3", r0, r1, {0}},
      {"euclidean:3", (Vec(3) << 1, 2, 3).finished(), (Vec(3) << -1, 0, 2).finished(), {}},
  };
  for (const auto& g : geos) {
    const ManifoldPtr m = make_manifold(g.id);
    const double tau = 0.5;
    const auto curve = oracle::geodesic(*m, g.p, g.q, g.winding);
    const DiscreteCurve sampled = curve.sample(m, DomainKind::interval, n);
    const double want = 0.5 * tau * tau * curve.speed() * curve.speed();
    const double got = evaluate(FunctionalSpec::tension(tau), sampled);
    r.cases.push_back(at_most(std::string("geodesic/") + g.id + "/value", relative(got, want), 0.02,
                              fmt("discrete=%.10g exact=%.10g", got, want)));
    const auto c = ConstraintSet::interpolation({{0.0, g.p}, {1.0, g.q}});
    const DiscreteCurve s = seed(c, m, n, SeedHint{g.winding, std::nullopt});
    r.cases.push_back(at_most(std::string("geodesic/") + g.id + "/seed", sup_distance(s, sampled), 1e-9));
  }
  return r;
}

SuiteResult run_suite(const std::string& name) {
  if (name == "gradient") return gradient_suite();
  if (name == "convergence") return convergence_suite();
  if (name == "oracle") return oracle_suite();
  throw ConfigError("unknown check suite '" + name + "' (expected gradient, convergence or oracle)");
}

}  // namespace varcurve::checks
