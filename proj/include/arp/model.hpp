#pragma once

#include <vector>

#include "arp/objective.hpp"
#include "arp/polynomial.hpp"
#include "arp/real.hpp"

namespace arp {

/// Order-p Taylor expansion of f at `center`; terms[j] = f^(j)(center) / j!.
struct TaylorModel {
  Real center;
  int order = 0;
  std::vector<Real> terms;

  [[nodiscard]] Real value(const Real& y) const;
  /// t(y) - t(center), summed without the constant term.
  [[nodiscard]] Real change(const Real& y) const;
  [[nodiscard]] Real gradient(const Real& y) const;
  [[nodiscard]] Real second_derivative(const Real& y) const;
  /// The model as a polynomial in the step d = y - center.
  [[nodiscard]] Polynomial1D in_step() const;
};

/// DomainError if p exceeds the objective's available derivatives or p < 1.
[[nodiscard]] TaylorModel build_taylor(const ObjectiveSpec& f, const Real& x, int p);

/// t(y) + sigma |y - center|^(p+1).
class RegularizedModel {
 public:
  RegularizedModel(TaylorModel taylor, Real sigma);

  [[nodiscard]] const TaylorModel& taylor() const { return taylor_; }
  [[nodiscard]] const Real& sigma() const { return sigma_; }
  [[nodiscard]] const Real& center() const { return taylor_.center; }
  [[nodiscard]] int order() const { return taylor_.order; }
  [[nodiscard]] int power() const { return taylor_.order + 1; }

  [[nodiscard]] Real value(const Real& y) const;
  [[nodiscard]] Real gradient(const Real& y) const;
  [[nodiscard]] Real second_derivative(const Real& y) const;
  /// sigma |y - center|^(p+1).
  [[nodiscard]] Real regularizer(const Real& y) const;
  /// m(y) - m(center) computed without the constant term.
  [[nodiscard]] Real change(const Real& y) const;
  /// Same quantities as functions of the step d = y - center.
  [[nodiscard]] Real change_at_step(const Real& d) const;
  [[nodiscard]] Real gradient_at_step(const Real& d) const;

  /// Polynomials in d equal to the model on d >= 0 (right) and d <= 0 (left).
  [[nodiscard]] Polynomial1D right_branch() const;
  [[nodiscard]] Polynomial1D left_branch() const;

 private:
  TaylorModel taylor_;
  Real sigma_;
};

struct ModelDecrease {
  Real taylor_decrease;  // t(center) - t(y)
  Real model_decrease;   // m(center) - m(y)
};

/// Both decreases from the constant-free sum of the Taylor terms; the model decrease
/// then subtracts the regularizer.
[[nodiscard]] ModelDecrease model_decrease(const RegularizedModel& m, const Real& y);

/// Margins (bound minus error) of the Taylor error bounds for the value, gradient and
/// second derivative of f at y, expanded at x with order p.
struct TaylorBoundMargins {
  Real value;
  Real gradient;
  Real hessian;
};

/// Requires metadata whose Lipschitz constant belongs to order p.
[[nodiscard]] TaylorBoundMargins audit_taylor_bounds(const ObjectiveSpec& f, const Real& x, const Real& y, int p);

}  // namespace arp
