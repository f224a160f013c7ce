#include "arp/objective.hpp"

#include <algorithm>
#include <memory>

#include "arp/errors.hpp"

namespace arp {

void ConvexityMeta::validate() const {
  if (q < 2) throw DomainError("convexity order q must be at least 2");
  if (mu_q.sign() <= 0 || r_q.sign() <= 0 || L_p.sign() <= 0 || nu.sign() <= 0) {
    throw DomainError("convexity metadata constants must be strictly positive");
  }
  if (lipschitz_order < 1) throw DomainError("lipschitz_order must be positive");
}

Real ObjectiveSpec::derivative(int order, const Real& x) const {
  if (order < 0 || order > p_max) {
    throw DomainError("objective '" + id + "' has no derivative of order " + std::to_string(order));
  }
  return oracle(order, x);
}

namespace {

// Full Taylor coefficients of a polynomial objective about x. They come from the oracle, so
// a Taylor model of order >= degree holds exactly the same numbers.
std::vector<Real> full_expansion(const ObjectiveSpec& f, const Real& x) {
  return f.taylor_terms(x, std::max(f.polynomial->degree(), 0));
}

// sum_{j >= from} c_j s^j
Real tail_sum(const std::vector<Real>& c, std::size_t from, const Real& s) {
  if (c.size() <= from) return Real(0);
  std::vector<Real> tail(c.begin() + static_cast<long>(from), c.end());
  return horner(tail, s) * pow(s, static_cast<long>(from));
}

}  // namespace

std::vector<Real> ObjectiveSpec::taylor_terms(const Real& x, int p) const {
  if (p > p_max) {
    throw DomainError("objective '" + id + "' provides derivatives up to order " + std::to_string(p_max) +
                      ", requested " + std::to_string(p));
  }
  std::vector<Real> terms;
  terms.reserve(static_cast<std::size_t>(p) + 1);
  for (int j = 0; j <= p; ++j) terms.push_back(derivative(j, x) / Real::factorial(j));
  return terms;
}

Real ObjectiveSpec::decrease(const Real& x, const Real& y) const {
  if (!polynomial) return value(x) - value(y);
  const std::vector<Real> c = full_expansion(*this, x);
  return -tail_sum(c, 1, y - x);
}

const ConvexityMeta& ObjectiveSpec::require_meta() const {
  if (!meta) throw DomainError("objective '" + id + "' carries no convexity metadata");
  return *meta;
}

Real ObjectiveSpec::gap(const Real& x) const {
  const ConvexityMeta& m = require_meta();
  if (polynomial) return decrease(x, m.x_star);
  return value(x) - m.f_star;
}

Real ObjectiveSpec::taylor_remainder(int order, const Real& x, const Real& y, int p) const {
  if (order < 0) throw DomainError("negative derivative order");
  const Real d = y - x;
  if (polynomial) {
    // Remainder is sum_{j > p} c_j d^j; differentiate term by term.
    const std::vector<Real> c = full_expansion(*this, x);
    Real acc(0);
    for (std::size_t j = static_cast<std::size_t>(p) + 1; j < c.size(); ++j) {
      if (static_cast<int>(j) < order) continue;
      Real falling(1);
      for (int i = 0; i < order; ++i) falling *= Real(static_cast<long>(j) - i);
      acc += c[j] * falling * pow(d, static_cast<long>(j) - order);
    }
    return acc;
  }
  Real model(0);
  const std::vector<Real> t = taylor_terms(x, p);
  for (int j = order; j <= p; ++j) {
    Real falling(1);
    for (int i = 0; i < order; ++i) falling *= Real(static_cast<long>(j - i));
    model += t[static_cast<std::size_t>(j)] * falling * pow(d, static_cast<long>(j - order));
  }
  return derivative(order, y) - model;
}

Real ObjectiveSpec::evaluation_scale(int order, const Real& x) const {
  if (!polynomial) return abs(derivative(order, x));
  Polynomial1D d = meta ? Polynomial1D(polynomial->taylor_coefficients(meta->x_star)) : *polynomial;
  for (int i = 0; i < order; ++i) d = d.derivative();
  return d.magnitude_at(meta ? x - meta->x_star : x);
}

ObjectiveSpec make_polynomial_objective(std::string id, const Polynomial1D& poly,
                                        std::optional<ConvexityMeta> meta) {
  if (poly.is_zero()) throw DomainError("objective polynomial is identically zero");
  if (meta) meta->validate();
  ObjectiveSpec f;
  f.id = std::move(id);
  f.p_max = ObjectiveSpec::kAllOrders;
  f.polynomial = poly;
  f.meta = meta;
  // Derivative tables are built once; evaluation is Horner in x or in x - x*.
  auto table = std::make_shared<std::vector<Polynomial1D>>();
  Polynomial1D base = meta ? Polynomial1D(poly.taylor_coefficients(meta->x_star)) : poly;
  while (true) {
    table->push_back(base);
    if (base.is_zero()) break;
    base = base.derivative();
  }
  std::optional<Real> shift;
  if (meta) shift = meta->x_star;
  f.oracle = [table, shift](int order, const Real& x) -> Real {
    if (static_cast<std::size_t>(order) >= table->size()) return Real(0);
    const Polynomial1D& d = (*table)[static_cast<std::size_t>(order)];
    return shift ? d(x - *shift) : d(x);
  };
  return f;
}

ObjectiveSpec builtin_example_A() {
  ConvexityMeta meta;
  meta.x_star = Real(1);
  meta.f_star = Real(-1);
  meta.q = 2;
  meta.mu_q = Real(4);
  meta.r_q = Real::rational(1, 10);
  meta.lipschitz_order = 3;
  meta.L_p = Real(72);
  meta.nu = Real(30);
  return make_polynomial_objective("exampleA", Polynomial1D({Real(0), Real(0), Real(0), Real(-4), Real(3)}), meta);
}

ObjectiveSpec builtin_example_B(int p, int q) {
  if (q < 2 || q % 2 != 0) throw DomainError("exampleB needs an even q >= 2, got q = " + std::to_string(q));
  if (p <= q - 1) {
    throw DomainError("exampleB needs p > q - 1, got p = " + std::to_string(p) + ", q = " + std::to_string(q));
  }
  std::vector<Real> c(static_cast<std::size_t>(p) + 2, Real(0));
  c[static_cast<std::size_t>(q)] = Real::rational(1, q);
  c[static_cast<std::size_t>(p) + 1] = Real::rational(1, p + 1);
  ConvexityMeta meta;
  meta.x_star = Real(0);
  meta.f_star = Real(0);
  meta.q = q;
  meta.mu_q = Real::pow2(-q);
  meta.r_q = p == 2 ? Real::rational(1, 4) : Real::rational(1, 2);
  meta.lipschitz_order = p;
  meta.L_p = Real::factorial(p);
  meta.nu = Real(2);
  return make_polynomial_objective("exampleB(" + std::to_string(p) + "," + std::to_string(q) + ")",
                                   Polynomial1D(std::move(c)), meta);
}

Real finite_difference_check(const ObjectiveSpec& f, int order, const Real& x, const Real& h) {
  if (order < 1 || order > f.p_max) throw DomainError("finite_difference_check order out of range");
  if (h.sign() <= 0) throw DomainError("finite_difference_check needs h > 0");
  const Real central = (f.derivative(order - 1, x + h) - f.derivative(order - 1, x - h)) / (Real(2) * h);
  return abs(f.derivative(order, x) - central);
}

namespace {

// (slack) / max(|lhs|, |rhs|) for lhs <= rhs.
Real relative_margin(const Real& lhs, const Real& rhs) {
  const Real scale = max(abs(lhs), abs(rhs));
  if (scale.is_zero()) return Real(0);
  return (rhs - lhs) / scale;
}

}  // namespace

Real ConvexityAudit::worst() const {
  Real w = gradient_monotonicity;
  for (const Real* m : {&function_convexity, &growth, &gradient_growth, &gradient_domination, &hessian_value,
                        &hessian_gradient}) {
    w = min(w, *m);
  }
  return w;
}

bool ConvexityAudit::consistent() const {
  return worst() >= -Real::pow2(-(worst().precision() / 2));
}

ConvexityAudit audit_uniform_convexity(const ObjectiveSpec& f, int samples) {
  const ConvexityMeta& m = f.require_meta();
  if (samples < 2) throw DomainError("audit_uniform_convexity needs at least 2 samples");
  const Real mu = m.mu_q;
  const Real q = Real(m.q);
  std::vector<Real> xs;
  std::vector<Real> grads;
  for (int i = 0; i < samples; ++i) {
    xs.push_back(m.x_star + m.r_q * Real::rational(2L * i - (samples - 1), samples - 1));
    grads.push_back(f.derivative(1, xs.back()));
  }
  ConvexityAudit a;
  const Real inf = Real::pow2(1000);
  a.gradient_monotonicity = inf;
  a.function_convexity = inf;
  a.growth = inf;
  a.gradient_growth = inf;
  a.gradient_domination = inf;
  a.hessian_value = inf;
  a.hessian_gradient = inf;

  const Real dom_coeff = (q - Real(1)) / q * pow_rational(Real(1) / mu, 1, m.q - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Real& x = xs[i];
    const Real e = abs(x - m.x_star);
    const Real gap = f.gap(x);
    const Real g = abs(grads[i]);
    a.growth = min(a.growth, relative_margin(mu / q * pow(e, static_cast<long>(m.q)), gap));
    a.gradient_growth = min(a.gradient_growth, relative_margin(mu * pow(e, static_cast<long>(m.q - 1)), g));
    a.gradient_domination =
        min(a.gradient_domination, relative_margin(gap, dom_coeff * pow_rational(g, m.q, m.q - 1)));
    a.hessian_value = min(a.hessian_value, relative_margin(gap, m.nu / Real(2) * e * e));
    a.hessian_gradient = min(a.hessian_gradient, relative_margin(g, m.nu * e));
    ++a.points;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      const Real d = xs[j] - x;
      const Real dq = pow(abs(d), static_cast<long>(m.q));
      if (i < j) {
        a.gradient_monotonicity =
            min(a.gradient_monotonicity, relative_margin(mu * dq, (grads[j] - grads[i]) * d));
        ++a.pairs;
      }
      // f(y) - f(x) - f'(x)(y - x) >= (mu/q)|y - x|^q, with f(y) - f(x) = -decrease(x, y).
      const Real lhs = mu / q * dq;
      const Real rhs = -f.decrease(x, xs[j]) - grads[i] * d;
      a.function_convexity = min(a.function_convexity, relative_margin(lhs, rhs));
    }
  }
  return a;
}

}  // namespace arp
