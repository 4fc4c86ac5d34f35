#pragma once

#include <string>
#include <variant>
#include <vector>

#include "varcurve/curve.hpp"
#include "varcurve/vectorfield.hpp"

namespace varcurve {

/// Cubic in tension: 1/2 (|grad_t x'|_0^2 + tau^2 |x'|_0^2). tau = 0 is the Riemannian cubic.
struct Tension {
  double tau = 0.0;
};

/// Conditional extremal cost 1/2 |grad_t^{k-1} x' - A(t, x)|_0^2 for k in {1, 2}.
struct Conditional {
  int k = 1;
  PriorField field;
};

/// Energy 1/2 |x'|_{k-1}^2: k = 1 is 1/2 |x'|_0^2, k = 2 adds 1/2 |grad_t x'|_0^2.
struct Energy {
  int k = 1;
};

/// Tagged choice of action functional. Factories validate tau >= 0 and k in {1, 2}.
class FunctionalSpec {
 public:
  using Kind = std::variant<Tension, Conditional, Energy>;

  static FunctionalSpec tension(double tau);
  static FunctionalSpec conditional(int k, PriorField field);
  static FunctionalSpec energy(int k);

  const Kind& kind() const { return kind_; }
  std::string describe() const;

  /// Weight of 1/2 |grad_t x'|^2 (0 or 1).
  double acceleration_weight() const;
  /// Coefficient c of 1/2 c |x'|_0^2 in the geodesic-increment form (tau^2, 1 or 0).
  double speed_weight() const;
  /// Prior field paired with the acceleration term (conditional k = 2), or null.
  const PriorField* acceleration_field() const;
  /// Prior field of the first-order conditional term (conditional k = 1), or null.
  const PriorField* velocity_field() const;
  /// Tension parameter, 0 for the other kinds.
  double tau() const;

 private:
  explicit FunctionalSpec(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Individual contributions; value() is their sum.
struct FunctionalTerms {
  double acceleration = 0.0;  ///< 1/2 sum w_j |P(a_j) - A_j|^2 over interior samples
  double speed = 0.0;         ///< 1/2 c |x'|_0^2
  double conditional = 0.0;   ///< first-order conditional term
  double value() const { return acceleration + speed + conditional; }
};

/**
 * Quadrature weights for the interior acceleration samples.
 *
 * Interval: indices 1..N-1 carry trapezoid weights on [h, 1-h] with the two
 * boundary cells [0, h] and [1-h, 1] closed by constant extension, i.e.
 * 3h/2 at j = 1 and j = N-1 and h elsewhere (second order, sums to 1).
 * Endpoint entries are zero. Circle: h everywhere.
 */
Eigen::VectorXd acceleration_weights(const DiscreteCurve& x);

FunctionalTerms evaluate_terms(const FunctionalSpec& spec, const DiscreteCurve& x);
double evaluate(const FunctionalSpec& spec, const DiscreteCurve& x);

/// Exact Riemannian gradient of the discrete objective with respect to each
/// sample; zero where `free` is false. `free.size()` must equal the sample count.
TangentField gradient(const FunctionalSpec& spec, const DiscreteCurve& x, const std::vector<bool>& free);

/// Euclidean norm of the gradient over free samples (zero iff x is a discrete critical point).
double el_residual(const FunctionalSpec& spec, const DiscreteCurve& x, const std::vector<bool>& free);

/// Norm of a gradient field over all its samples.
double field_norm(const TangentField& g);

}  // namespace varcurve
