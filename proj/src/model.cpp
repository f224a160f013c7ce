#include "arp/model.hpp"

#include "arp/errors.hpp"

namespace arp {

namespace {

// sum_{j >= 1} c_j d^j
Real without_constant(const std::vector<Real>& c, const Real& d) {
  if (c.size() <= 1) return Real(0);
  std::vector<Real> tail(c.begin() + 1, c.end());
  return horner(tail, d) * d;
}

Real falling_factorial(long j, int k) {
  Real r(1);
  for (int i = 0; i < k; ++i) r *= Real(j - i);
  return r;
}

Real derivative_sum(const std::vector<Real>& c, const Real& d, int k) {
  Real acc(0);
  for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(k);) {
    acc *= d;
    acc += c[j] * falling_factorial(static_cast<long>(j), k);
  }
  return acc;
}

}  // namespace

Real TaylorModel::value(const Real& y) const { return horner(terms, y - center); }

Real TaylorModel::change(const Real& y) const { return without_constant(terms, y - center); }

Real TaylorModel::gradient(const Real& y) const { return derivative_sum(terms, y - center, 1); }

Real TaylorModel::second_derivative(const Real& y) const { return derivative_sum(terms, y - center, 2); }

Polynomial1D TaylorModel::in_step() const { return Polynomial1D(terms); }

TaylorModel build_taylor(const ObjectiveSpec& f, const Real& x, int p) {
  if (p < 1) throw DomainError("Taylor order must be at least 1");
  TaylorModel t;
  t.center = x;
  t.order = p;
  t.terms = f.taylor_terms(x, p);
  return t;
}

RegularizedModel::RegularizedModel(TaylorModel taylor, Real sigma) : taylor_(std::move(taylor)), sigma_(std::move(sigma)) {
  if (sigma_.sign() < 0) throw DomainError("regularization weight must be nonnegative");
}

Real RegularizedModel::regularizer(const Real& y) const {
  return sigma_ * pow(abs(y - center()), static_cast<long>(power()));
}

Real RegularizedModel::value(const Real& y) const { return taylor_.value(y) + regularizer(y); }

Real RegularizedModel::change_at_step(const Real& d) const {
  return without_constant(taylor_.terms, d) + sigma_ * pow(abs(d), static_cast<long>(power()));
}

Real RegularizedModel::change(const Real& y) const { return change_at_step(y - center()); }

Real RegularizedModel::gradient_at_step(const Real& d) const {
  return derivative_sum(taylor_.terms, d, 1) + Real(power()) * sigma_ * signed_power(d, order());
}

Real RegularizedModel::gradient(const Real& y) const { return gradient_at_step(y - center()); }

Real RegularizedModel::second_derivative(const Real& y) const {
  const Real d = y - center();
  Real reg = Real(power()) * Real(order()) * sigma_;
  if (order() > 1) reg *= pow(abs(d), static_cast<long>(order() - 1));
  return taylor_.second_derivative(y) + reg;
}

Polynomial1D RegularizedModel::right_branch() const {
  return taylor_.in_step() + Polynomial1D::monomial(sigma_, power());
}

Polynomial1D RegularizedModel::left_branch() const {
  const Real s = power() % 2 == 0 ? sigma_ : -sigma_;
  return taylor_.in_step() + Polynomial1D::monomial(s, power());
}

ModelDecrease model_decrease(const RegularizedModel& m, const Real& y) {
  const Real td = -m.taylor().change(y);
  return {td, td - m.regularizer(y)};
}

TaylorBoundMargins audit_taylor_bounds(const ObjectiveSpec& f, const Real& x, const Real& y, int p) {
  const ConvexityMeta& meta = f.require_meta();
  if (meta.lipschitz_order != p) {
    throw DomainError("metadata Lipschitz constant is for order " + std::to_string(meta.lipschitz_order) +
                      ", not " + std::to_string(p));
  }
  if (p < 1) throw DomainError("Taylor order must be at least 1");
  const Real r = abs(y - x);
  TaylorBoundMargins out;
  out.value = meta.L_p / Real::factorial(p + 1) * pow(r, static_cast<long>(p + 1)) -
              abs(f.taylor_remainder(0, x, y, p));
  out.gradient = meta.L_p / Real::factorial(p) * pow(r, static_cast<long>(p)) - abs(f.taylor_remainder(1, x, y, p));
  out.hessian = meta.L_p / Real::factorial(p - 1) * pow(r, static_cast<long>(p - 1)) -
                abs(f.taylor_remainder(2, x, y, p));
  return out;
}

}  // namespace arp
