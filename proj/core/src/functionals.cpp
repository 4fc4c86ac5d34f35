#include "varcurve/functionals.hpp"

#include <cmath>
#include <sstream>

#include "varcurve/error.hpp"

namespace varcurve {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_order(int k) {
  if (k != 1 && k != 2) throw ConfigError("functional order k must be 1 or 2");
}

}  // namespace

FunctionalSpec FunctionalSpec::tension(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("tension tau must be finite and >= 0");
  return FunctionalSpec(Tension{tau});
}

FunctionalSpec FunctionalSpec::conditional(int k, PriorField field) {
  require_order(k);
  return FunctionalSpec(Conditional{k, std::move(field)});
}

FunctionalSpec FunctionalSpec::energy(int k) {
  require_order(k);
  return FunctionalSpec(Energy{k});
}

std::string FunctionalSpec::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Tension& t) { os << "tension(tau=" << t.tau << ")"; },
                 [&](const Conditional& c) { os << "conditional(k=" << c.k << ", field=" << to_string(c.field.kind()) << ")"; },
                 [&](const Energy& e) { os << "energy(k=" << e.k << ")"; },
             },
             kind_);
  return os.str();
}

double FunctionalSpec::acceleration_weight() const {
  return std::visit(overloaded{
                        [](const Tension&) { return 1.0; },
                        [](const Conditional& c) { return c.k == 2 ? 1.0 : 0.0; },
                        [](const Energy& e) { return e.k == 2 ? 1.0 : 0.0; },
                    },
                    kind_);
}

double FunctionalSpec::speed_weight() const {
  return std::visit(overloaded{
                        [](const Tension& t) { return t.tau * t.tau; },
                        [](const Conditional&) { return 0.0; },
                        [](const Energy&) { return 1.0; },
                    },
                    kind_);
}

const PriorField* FunctionalSpec::acceleration_field() const {
  if (const auto* c = std::get_if<Conditional>(&kind_); c && c->k == 2) return &c->field;
  return nullptr;
}

const PriorField* FunctionalSpec::velocity_field() const {
  if (const auto* c = std::get_if<Conditional>(&kind_); c && c->k == 1) return &c->field;
  return nullptr;
}

double FunctionalSpec::tau() const {
  if (const auto* t = std::get_if<Tension>(&kind_)) return t->tau;
  return 0.0;
}

Eigen::VectorXd acceleration_weights(const DiscreteCurve& x) {
  const int n = x.grid_size();
  const double h = x.spacing();
  if (x.domain() == DomainKind::circle) return Eigen::VectorXd::Constant(n, h);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n + 1, h);
  w[0] = w[n] = 0.0;
  w[1] = w[n - 1] = 1.5 * h;
  return w;
}

namespace {

const PriorField& zero_field() {
  static const PriorField zero = PriorField::zero();
  return zero;
}

// Interior sample indices carrying an acceleration value.
std::pair<int, int> interior_range(const DiscreteCurve& x) {
  if (x.domain() == DomainKind::circle) return {0, x.grid_size()};
  return {1, x.grid_size()};
}

double acceleration_term(const DiscreteCurve& x, const Eigen::MatrixXd& d, const PriorField& field) {
  const Manifold& m = x.manifold();
  const Eigen::VectorXd w = acceleration_weights(x);
  const int n = x.grid_size();
  const double scale = static_cast<double>(n) * n;
  const auto [first, last] = interior_range(x);
  double total = 0.0;
  for (int j = first; j < last; ++j) {
    const int prev = (j + n - 1) % n;
    const Vec residual = m.project_tangent(x.sample(j), scale * (d.col(j) - d.col(prev))) -
                         field.eval(m, x.time(j), x.sample(j));
    total += w[j] * residual.squaredNorm();
  }
  return 0.5 * total;
}

double conditional_velocity_term(const DiscreteCurve& x, const Eigen::MatrixXd& d, const PriorField& field) {
  const Manifold& m = x.manifold();
  const int n = x.grid_size();
  const double h = x.spacing();
  double total = 0.0;
  for (int j = 0; j < x.segment_count(); ++j) {
    const Vec seg = n * d.col(j);
    const Vec left = m.project_tangent(x.sample(j), seg) - field.eval(m, x.time(j), x.sample(j));
    const Vec right = m.project_tangent(x.sample(j + 1), seg) - field.eval(m, x.time(x.index(j + 1)), x.sample(j + 1));
    total += 0.5 * h * (left.squaredNorm() + right.squaredNorm());
  }
  return 0.5 * total;
}

}  // namespace

FunctionalTerms evaluate_terms(const FunctionalSpec& spec, const DiscreteCurve& x) {
  const Eigen::MatrixXd d = segment_differences(x);
  FunctionalTerms terms;
  if (spec.acceleration_weight() > 0.0) {
    const PriorField* f = spec.acceleration_field();
    terms.acceleration = acceleration_term(x, d, f ? *f : zero_field());
  }
  if (const double c = spec.speed_weight(); c > 0.0) {
    terms.speed = 0.5 * c * speed_norm_sq(x);
  }
  if (const PriorField* f = spec.velocity_field()) {
    terms.conditional = conditional_velocity_term(x, d, *f);
  }
  return terms;
}

double evaluate(const FunctionalSpec& spec, const DiscreteCurve& x) { return evaluate_terms(spec, x).value(); }

TangentField gradient(const FunctionalSpec& spec, const DiscreteCurve& x, const std::vector<bool>& free) {
  if (static_cast<int>(free.size()) != x.sample_count()) {
    throw UsageError("gradient: free mask size does not match sample count");
  }
  const Eigen::MatrixXd d = segment_differences(x);
  const Manifold& m = x.manifold();
  const int n = x.grid_size();
  const double h = x.spacing();
  const int count = x.sample_count();
  auto at = [&](int j) { return x.index(j); };

  // Ambient gradient of the projection-based terms; projected at the end.
  Eigen::MatrixXd ambient = Eigen::MatrixXd::Zero(m.ambient_dim(), count);

  if (spec.acceleration_weight() > 0.0) {
    const PriorField* fp = spec.acceleration_field();
    const PriorField& field = fp ? *fp : zero_field();
    const Eigen::VectorXd w = acceleration_weights(x);
    const double scale = static_cast<double>(n) * n;
    const auto [first, last] = interior_range(x);
    for (int j = first; j < last; ++j) {
      const int prev = (j + n - 1) % n;
      const Vec second = scale * (d.col(j) - d.col(prev));
      const auto p = x.sample(j);
      const double t = x.time(j);
      const Vec residual = m.project_tangent(p, second) - field.eval(m, t, p);
      const Vec cot = (w[j] * scale) * m.project_tangent(p, residual);
      ambient.col(at(j + 1)) += cot;
      ambient.col(at(j)) -= 2.0 * cot;
      ambient.col(at(j - 1)) += cot;
      ambient.col(at(j)) += w[j] * (m.projection_pullback(p, second, residual) - field.pullback(m, t, p, residual));
    }
  }

  if (const PriorField* fp = spec.velocity_field()) {
    const PriorField& field = *fp;
    for (int j = 0; j < x.segment_count(); ++j) {
      const Vec seg = n * d.col(j);
      for (int side = 0; side < 2; ++side) {
        const int idx = j + side;
        const auto p = x.sample(idx);
        const double t = x.time(x.index(idx));
        const Vec residual = 0.5 * h * (m.project_tangent(p, seg) - field.eval(m, t, p));
        const Vec cot = n * m.project_tangent(p, residual);
        ambient.col(at(j + 1)) += cot;
        ambient.col(at(j)) -= cot;
        ambient.col(at(idx)) += m.projection_pullback(p, seg, residual) - field.pullback(m, t, p, residual);
      }
    }
  }

  Eigen::MatrixXd riemannian(m.ambient_dim(), count);
  for (int j = 0; j < count; ++j) riemannian.col(j) = m.project_tangent(x.sample(j), ambient.col(j));

  if (const double c = spec.speed_weight(); c > 0.0) {
    // d/dp of 1/2 dist(p, q)^2 is -log_p(q).
    const double coeff = c * n;
    for (int j = 0; j < x.segment_count(); ++j) {
      riemannian.col(at(j)) -= coeff * m.log(x.sample(j), x.sample(j + 1));
      riemannian.col(at(j + 1)) -= coeff * m.log(x.sample(j + 1), x.sample(j));
    }
  }

  for (int j = 0; j < count; ++j) {
    if (!free[static_cast<std::size_t>(j)]) riemannian.col(j).setZero();
  }
  return TangentField(x, std::move(riemannian));
}

double field_norm(const TangentField& g) { return g.vectors.norm(); }

double el_residual(const FunctionalSpec& spec, const DiscreteCurve& x, const std::vector<bool>& free) {
  return field_norm(gradient(spec, x, free));
}

}  // namespace varcurve
