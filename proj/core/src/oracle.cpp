#include "varcurve/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "varcurve/error.hpp"

namespace varcurve::oracle {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCutTol = 1e-8;

using Basis = std::array<double, 4>;

// (sinh(x) - x) / x^3 without cancellation for small x.
double sinh_minus_x_over_x3(double x) {
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    return (1.0 / 6.0) * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0 * (1.0 + x2 / 72.0)));
  }
  return (std::sinh(x) - x) / (x * x * x);
}

// Basis 1, s, (cosh(tau s) - 1) / tau^2, (sinh(tau s) - tau s) / tau^3 and its derivatives.
Basis shifted_basis(double s, double tau, int order) {
  const double x = tau * s;
  const double sinhc = tau == 0.0 ? s : std::sinh(x) / tau;                         // sinh(tau s) / tau
  const double coshm = tau == 0.0 ? 0.5 * s * s : 2.0 * std::pow(std::sinh(0.5 * x) / tau, 2);  // (cosh - 1) / tau^2
  const double ch = std::cosh(x);
  switch (order) {
    case 0: return {1.0, s, coshm, s * s * s * sinh_minus_x_over_x3(x)};
    case 1: return {0.0, 1.0, sinhc, coshm};
    case 2: return {0.0, 0.0, ch, sinhc};
    case 3: return {0.0, 0.0, tau * tau * sinhc, ch};
    case 4: return {0.0, 0.0, tau * tau * ch, tau * tau * sinhc};
    default: throw UsageError("oracle: derivative order must be in 0..4");
  }
}

// Basis 1, s, e^{-tau s}, e^{-tau (w - s)}: bounded for large tau.
Basis exponential_basis(double s, double width, double tau, int order) {
  const double e1 = std::exp(-tau * s);
  const double e2 = std::exp(-tau * (width - s));
  const double p = std::pow(tau, order);
  const double sign = order % 2 == 0 ? 1.0 : -1.0;
  switch (order) {
    case 0: return {1.0, s, e1, e2};
    case 1: return {0.0, 1.0, -tau * e1, tau * e2};
    default:
      if (order > 4) throw UsageError("oracle: derivative order must be in 0..4");
      return {0.0, 0.0, sign * p * e1, p * e2};
  }
}

// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  const Eigen::VectorXd weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), weights};
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  static const auto rule = gauss_legendre(10);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double mid = a + (i + 0.5) * width;
    for (int k = 0; k < rule.first.size(); ++k) total += 0.5 * width * rule.second[k] * f(mid + 0.5 * width * rule.first[k]);
  }
  return total;
}

void require_same_dim(std::initializer_list<const Vec*> vs) {
  const auto d = (*vs.begin())->size();
  for (const Vec* v : vs) {
    if (v->size() != d) throw UsageError("oracle: boundary data dimensions differ");
  }
}

}  // namespace

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::hermite_cubic: return "hermite_cubic";
    case CurveKind::tension_1d: return "tension_1d";
    case CurveKind::tension_spline: return "tension_spline";
    case CurveKind::geodesic: return "geodesic";
    case CurveKind::line: return "line";
  }
  return "?";
}

Vec ClosedFormCurve::spline_derivative(double t, int order) const {
  // Last piece whose start is <= t; earlier times use the first piece.
  std::size_t i = 0;
  while (i + 1 < pieces_.size() && t >= pieces_[i + 1].start) ++i;
  const Piece& pc = pieces_[i];
  const double s = t - pc.start;
  const Basis b = pc.exponential ? exponential_basis(s, pc.width, tau_, order) : shifted_basis(s, tau_, order);
  return pc.coeffs * Eigen::Map<const Eigen::Vector4d>(b.data());
}

Vec ClosedFormCurve::derivative(double t, int order) const {
  if (order < 0 || order > 4) throw UsageError("oracle: derivative order must be in 0..4");
  switch (kind_) {
    case CurveKind::hermite_cubic:
    case CurveKind::line: {
      Eigen::Vector4d b = Eigen::Vector4d::Zero();
      // d^order/dt^order of t^k
      for (int k = order; k < 4; ++k) {
        double c = 1.0;
        for (int m = 0; m < order; ++m) c *= k - m;
        b[k] = c * std::pow(t, k - order);
      }
      return monomial_ * b;
    }
    case CurveKind::tension_1d:
    case CurveKind::tension_spline:
      return spline_derivative(t, order);
    case CurveKind::geodesic:
      if (order != 0) throw UsageError("oracle: geodesic curves evaluate positions only");
      return eval(t);
  }
  return Vec();
}

Vec ClosedFormCurve::eval(double t) const {
  if (kind_ != CurveKind::geodesic) return derivative(t, 0);
  const double angle = speed_ * t;
  switch (manifold_) {
    case ManifoldKind::euclidean:
      return base_ + t * direction_;
    case ManifoldKind::torus: {
      Vec out = base_ + t * direction_;
      for (auto& c : out) {
        c = std::fmod(c, kTwoPi);
        if (c < 0.0) c += kTwoPi;
        if (c >= kTwoPi) c = 0.0;
      }
      return out;
    }
    case ManifoldKind::sphere:
      return std::cos(angle) * base_ + std::sin(angle) * direction_;
    case ManifoldKind::so3: {
      // speed_ is sqrt(2) times the rotation angle under the Frobenius metric.
      const Eigen::Matrix3d base = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(base_.data());
      const Eigen::Vector3d axis = direction_.head<3>();
      const Eigen::Matrix3d r = base * Eigen::AngleAxisd(angle / std::numbers::sqrt2, axis).toRotationMatrix();
      Vec out(9);
      Eigen::Map<Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(out.data()) = r;
      return out;
    }
  }
  return Vec();
}

std::vector<double> ClosedFormCurve::breaks() const {
  if (pieces_.empty()) return {0.0, 1.0};
  std::vector<double> out;
  for (const auto& pc : pieces_) out.push_back(pc.start);
  out.push_back(pieces_.back().start + pieces_.back().width);
  return out;
}

DiscreteCurve ClosedFormCurve::sample(ManifoldPtr m, DomainKind domain, int n) const {
  return DiscreteCurve::sample(std::move(m), domain, n, [this](double t) { return eval(t); });
}

ClosedFormCurve hermite_cubic(const Vec& p, const Vec& v, const Vec& q, const Vec& w) {
  require_same_dim({&p, &v, &q, &w});
  Eigen::Matrix4d a;
  a << 1, 0, 0, 0,
       0, 1, 0, 0,
       1, 1, 1, 1,
       0, 1, 2, 3;
  Eigen::MatrixXd rhs(4, p.size());
  rhs.row(0) = p.transpose();
  rhs.row(1) = v.transpose();
  rhs.row(2) = q.transpose();
  rhs.row(3) = w.transpose();
  ClosedFormCurve c;
  c.kind_ = CurveKind::hermite_cubic;
  c.dim_ = static_cast<int>(p.size());
  c.monomial_ = a.fullPivLu().solve(rhs).transpose();
  c.report_ = c.monomial_;
  return c;
}

ClosedFormCurve tension_spline(const std::vector<double>& times, const std::vector<Vec>& values, double tau,
                               EndCondition bc, const std::optional<Vec>& left_velocity,
                               const std::optional<Vec>& right_velocity) {
  if (times.size() < 2 || times.size() != values.size()) {
    throw UsageError("oracle: spline needs matching times and values, at least two");
  }
  if (!(tau >= 0.0) || tau > 50.0) throw UsageError("oracle: tau must lie in [0, 50]");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw UsageError("oracle: spline times must increase");
  }
  if (bc == EndCondition::clamped && (!left_velocity || !right_velocity)) {
    throw UsageError("oracle: clamped spline needs both end velocities");
  }
  const int dim = static_cast<int>(values.front().size());
  const int pieces = static_cast<int>(times.size()) - 1;

  ClosedFormCurve c;
  c.kind_ = CurveKind::tension_spline;
  c.dim_ = dim;
  c.tau_ = tau;
  for (int i = 0; i < pieces; ++i) {
    ClosedFormCurve::Piece pc;
    pc.start = times[static_cast<std::size_t>(i)];
    pc.width = times[static_cast<std::size_t>(i + 1)] - pc.start;
    pc.exponential = tau * pc.width > 1.0;
    c.pieces_.push_back(pc);
  }
  auto basis = [&](int piece, double s, int order) {
    const auto& pc = c.pieces_[static_cast<std::size_t>(piece)];
    return pc.exponential ? exponential_basis(s, pc.width, tau, order) : shifted_basis(s, tau, order);
  };

  const int size = 4 * pieces;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(size, dim);
  int row = 0;
  auto put = [&](int piece, const Basis& b, double sign) {
    for (int k = 0; k < 4; ++k) a(row, 4 * piece + k) += sign * b[static_cast<std::size_t>(k)];
  };
  for (int i = 0; i < pieces; ++i) {
    const double width = c.pieces_[static_cast<std::size_t>(i)].width;
    put(i, basis(i, 0.0, 0), 1.0);
    rhs.row(row++) = values[static_cast<std::size_t>(i)].transpose();
    put(i, basis(i, width, 0), 1.0);
    rhs.row(row++) = values[static_cast<std::size_t>(i + 1)].transpose();
  }
  for (int i = 1; i < pieces; ++i) {
    const double width = c.pieces_[static_cast<std::size_t>(i - 1)].width;
    for (int order = 1; order <= 2; ++order) {
      put(i - 1, basis(i - 1, width, order), 1.0);
      put(i, basis(i, 0.0, order), -1.0);
      ++row;
    }
  }
  const double last_width = c.pieces_.back().width;
  if (bc == EndCondition::position_only) {
    put(0, basis(0, 0.0, 2), 1.0);
    ++row;
    put(pieces - 1, basis(pieces - 1, last_width, 2), 1.0);
    ++row;
  } else {
    put(0, basis(0, 0.0, 1), 1.0);
    rhs.row(row++) = left_velocity->transpose();
    put(pieces - 1, basis(pieces - 1, last_width, 1), 1.0);
    rhs.row(row++) = right_velocity->transpose();
  }

  const auto lu = a.fullPivLu();
  if (!lu.isInvertible()) throw Error("oracle: singular spline system");
  const Eigen::MatrixXd sol = lu.solve(rhs);
  for (int i = 0; i < pieces; ++i) c.pieces_[static_cast<std::size_t>(i)].coeffs = sol.middleRows(4 * i, 4).transpose();
  return c;
}

ClosedFormCurve tension_1d(const Vec& p, const Vec& v, const Vec& q, const Vec& w, double tau, EndCondition bc) {
  require_same_dim({&p, &v, &q, &w});
  if (!(tau > 0.0) || tau > 50.0) throw UsageError("oracle: tension_1d needs 0 < tau <= 50");
  ClosedFormCurve c = bc == EndCondition::clamped ? tension_spline({0.0, 1.0}, {p, q}, tau, bc, v, w)
                                                  : tension_spline({0.0, 1.0}, {p, q}, tau, bc);
  c.kind_ = CurveKind::tension_1d;
  // Re-express in the basis 1, t, cosh(tau t), sinh(tau t).
  const auto& pc = c.pieces_.front();
  c.report_.resize(c.dim_, 4);
  if (pc.exponential) {
    // e^{-tau t} = cosh - sinh, e^{-tau (1 - t)} = e^{-tau} (cosh + sinh)
    const double e = std::exp(-tau);
    c.report_.col(0) = pc.coeffs.col(0);
    c.report_.col(1) = pc.coeffs.col(1);
    c.report_.col(2) = pc.coeffs.col(2) + e * pc.coeffs.col(3);
    c.report_.col(3) = -pc.coeffs.col(2) + e * pc.coeffs.col(3);
  } else {
    const double t2 = tau * tau, t3 = t2 * tau;
    c.report_.col(0) = pc.coeffs.col(0) - pc.coeffs.col(2) / t2;
    c.report_.col(1) = pc.coeffs.col(1) - pc.coeffs.col(3) / t2;
    c.report_.col(2) = pc.coeffs.col(2) / t2;
    c.report_.col(3) = pc.coeffs.col(3) / t3;
  }
  return c;
}

ClosedFormCurve geodesic(const Manifold& m, const Vec& p, const Vec& q, const std::vector<int>& winding,
                         const std::optional<Vec>& plane) {
  if (p.size() != m.ambient_dim() || q.size() != m.ambient_dim()) {
    throw UsageError("oracle: geodesic endpoints do not match the manifold");
  }
  ClosedFormCurve c;
  c.kind_ = CurveKind::geodesic;
  c.dim_ = static_cast<int>(p.size());
  c.manifold_ = m.kind();
  c.base_ = p;
  const bool any_turns = std::any_of(winding.begin(), winding.end(), [](int w) { return w != 0; });
  auto single_turns = [&] {
    if (winding.empty()) return 0;
    if (winding.size() != 1) throw ConfigError("oracle: winding is a single integer on this manifold");
    return winding.front();
  };

  switch (m.kind()) {
    case ManifoldKind::euclidean:
      if (any_turns) throw ConfigError("oracle: euclidean space has no winding classes");
      c.direction_ = q - p;
      c.speed_ = c.direction_.norm();
      return c;
    case ManifoldKind::torus: {
      Vec delta(p.size());
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        delta[i] = std::remainder(q[i] - p[i], kTwoPi);
        if (std::abs(std::abs(delta[i]) - kPi) < kCutTol && winding.empty()) {
          throw ConfigError("oracle: torus endpoints at the cut locus need a winding");
        }
      }
      if (!winding.empty()) {
        if (static_cast<Eigen::Index>(winding.size()) != p.size()) {
          throw ConfigError("oracle: torus winding needs one integer per coordinate");
        }
        for (Eigen::Index i = 0; i < p.size(); ++i) delta[i] += kTwoPi * winding[static_cast<std::size_t>(i)];
      }
      c.direction_ = delta;
      c.speed_ = delta.norm();
      return c;
    }
    case ManifoldKind::sphere: {
      const int turns = single_turns();
      const double cosine = p.dot(q);
      Vec normal = q - cosine * p;
      double angle = std::atan2(normal.norm(), cosine);
      const bool at_cut = angle > kPi - kCutTol;
      const bool equal = angle < kCutTol;
      if (at_cut || (equal && turns != 0)) {
        if (!plane) throw ConfigError("oracle: geodesic endpoints need plane data");
        normal = *plane - plane->dot(p) * p;
        if (at_cut) angle = kPi;
      }
      if (normal.norm() == 0.0) {
        c.direction_ = Vec::Zero(p.size());
      } else {
        c.direction_ = normal / normal.norm();
      }
      c.speed_ = angle + kTwoPi * turns;
      return c;
    }
    case ManifoldKind::so3: {
      const int turns = single_turns();
      using RowMajor = Eigen::Matrix<double, 3, 3, Eigen::RowMajor>;
      const Eigen::Matrix3d a = Eigen::Map<const RowMajor>(p.data());
      const Eigen::Matrix3d b = Eigen::Map<const RowMajor>(q.data());
      const Eigen::AngleAxisd rel(a.transpose() * b);
      double angle = rel.angle();
      Eigen::Vector3d axis = rel.axis();
      const bool at_cut = angle > kPi - kCutTol;
      const bool equal = angle < kCutTol;
      if (at_cut || (equal && turns != 0)) {
        if (!plane) throw ConfigError("oracle: geodesic endpoints need an axis direction");
        const Eigen::Matrix3d d = Eigen::Map<const RowMajor>(plane->data());
        const Eigen::Matrix3d omega = 0.5 * (a.transpose() * d - d.transpose() * a);
        Eigen::Vector3d hint(omega(2, 1), omega(0, 2), omega(1, 0));
        hint.normalize();
        if (at_cut) {
          angle = kPi;
          if (axis.dot(hint) < 0.0) axis = -axis;
        } else {
          axis = hint;
        }
      }
      c.direction_ = axis;
      c.speed_ = std::numbers::sqrt2 * (angle + kTwoPi * turns);
      return c;
    }
  }
  return c;
}

LineResult conditional_line(const Vec& p, const Vec& q, const Vec& a) {
  require_same_dim({&p, &q, &a});
  ClosedFormCurve c;
  c.kind_ = CurveKind::line;
  c.dim_ = static_cast<int>(p.size());
  c.monomial_ = Eigen::MatrixXd::Zero(p.size(), 4);
  c.monomial_.col(0) = p;
  c.monomial_.col(1) = q - p;
  c.report_.resize(p.size(), 2);
  c.report_.col(0) = p;
  c.report_.col(1) = q;
  return {c, 0.5 * ((q - p) - a).squaredNorm()};
}

double tension_value(const ClosedFormCurve& x, double tau) {
  if (x.kind() == CurveKind::geodesic) throw UsageError("oracle: tension_value needs a Euclidean curve");
  const auto integrand = [&](double t) {
    return x.derivative(t, 2).squaredNorm() + tau * tau * x.derivative(t, 1).squaredNorm();
  };
  // Panels are aligned with spline knots so each integrates a smooth piece.
  std::vector<double> cuts{0.0, 1.0};
  for (double b : x.breaks()) {
    if (b > 0.0 && b < 1.0) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate(integrand, cuts[i], cuts[i + 1], 32);
  return 0.5 * total;
}

}  // namespace varcurve::oracle
