#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arp/polynomial.hpp"
#include "arp/real.hpp"

namespace arp {

/// Ground truth around a known local minimizer: local uniform convexity of order q with
/// modulus mu_q on the ball of radius r_q, a Lipschitz constant for the derivative of
/// order lipschitz_order, and a bound nu on the second derivative near x_star.
struct ConvexityMeta {
  Real x_star;
  Real f_star;
  int q = 2;
  Real mu_q;
  Real r_q;
  int lipschitz_order = 1;
  Real L_p;
  Real nu;

  /// DomainError unless q >= 2 and all constants are strictly positive.
  void validate() const;
};

/// (order, x) -> order-th derivative of f at x.
using DerivativeOracle = std::function<Real(int, const Real&)>;

/// One-dimensional objective with exact derivatives up to p_max.
struct ObjectiveSpec {
  static constexpr int kAllOrders = 1 << 20;

  std::string id;
  int dimension = 1;
  int p_max = 0;
  DerivativeOracle oracle;
  /// Present for polynomial objectives; enables cancellation-free differences.
  std::optional<Polynomial1D> polynomial;
  std::optional<ConvexityMeta> meta;

  /// Checked oracle call; DomainError for order outside [0, p_max].
  [[nodiscard]] Real derivative(int order, const Real& x) const;
  [[nodiscard]] Real value(const Real& x) const { return derivative(0, x); }
  /// Derivatives f^(j)(x) / j! for j = 0..p.
  [[nodiscard]] std::vector<Real> taylor_terms(const Real& x, int p) const;
  /// f(x) - f(y). For polynomials this is the exact expansion about x, which avoids
  /// cancelling two nearly equal function values.
  [[nodiscard]] Real decrease(const Real& x, const Real& y) const;
  /// f(x) - f(x_star); requires metadata.
  [[nodiscard]] Real gap(const Real& x) const;
  /// order-th derivative of f - t_x^p at y, where t_x^p is the order-p Taylor expansion at x.
  [[nodiscard]] Real taylor_remainder(int order, const Real& x, const Real& y, int p) const;
  /// Scale of the rounding error when the order-th derivative is evaluated at x.
  [[nodiscard]] Real evaluation_scale(int order, const Real& x) const;

  [[nodiscard]] const ConvexityMeta& require_meta() const;
};

/// Polynomial objective. With metadata, derivatives are evaluated in powers of x - x_star.
[[nodiscard]] ObjectiveSpec make_polynomial_objective(std::string id, const Polynomial1D& poly,
                                                      std::optional<ConvexityMeta> meta = std::nullopt);

/// 3x^4 - 4x^3 with minimizer x* = 1, f* = -1.
[[nodiscard]] ObjectiveSpec builtin_example_A();
/// x^q / q + x^(p+1) / (p+1) with degenerate minimizer x* = 0 (q even, p > q - 1).
[[nodiscard]] ObjectiveSpec builtin_example_B(int p, int q);

/// |f^(order)(x) - (f^(order-1)(x+h) - f^(order-1)(x-h)) / 2h|.
[[nodiscard]] Real finite_difference_check(const ObjectiveSpec& f, int order, const Real& x, const Real& h);

/// Worst relative margins, (slack side) / max(|lhs|, |rhs|), of the uniform convexity
/// inequalities on sampled points of the ball around x_star. Negative means violated.
struct ConvexityAudit {
  Real gradient_monotonicity;  // (f'(x) - f'(y))(x - y) >= mu |x - y|^q
  Real function_convexity;     // f(y) >= f(x) + f'(x)(y - x) + (mu/q)|y - x|^q
  Real growth;                 // f(x) - f* >= (mu/q)|x - x*|^q
  Real gradient_growth;        // |f'(x)| >= mu |x - x*|^(q-1)
  Real gradient_domination;    // f(x) - f* <= (q-1)/q (1/mu)^(1/(q-1)) |f'(x)|^(q/(q-1))
  Real hessian_value;          // f(x) - f* <= nu/2 |x - x*|^2
  Real hessian_gradient;       // |f'(x)| <= nu |x - x*|
  int points = 0;
  int pairs = 0;

  [[nodiscard]] Real worst() const;
  /// All margins nonnegative up to rounding.
  [[nodiscard]] bool consistent() const;
};

/// Samples `samples` equispaced points of [x* - r_q, x* + r_q] and all pairs of them.
[[nodiscard]] ConvexityAudit audit_uniform_convexity(const ObjectiveSpec& f, int samples);

}  // namespace arp
