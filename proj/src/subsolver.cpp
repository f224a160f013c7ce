#include "arp/subsolver.hpp"

#include <algorithm>
#include <optional>

#include "arp/errors.hpp"
#include "arp/roots.hpp"

namespace arp {

std::string to_string(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::strict_local_min: return "strict_local_min";
    case CandidateKind::saddle_or_max: return "saddle_or_max";
    case CandidateKind::boundary_artifact: return "boundary_artifact";
  }
  return "unknown";
}

namespace {

CandidateMinimizer make_candidate(const RegularizedModel& m, const Real& d, CandidateKind kind) {
  CandidateMinimizer c;
  c.point = m.center() + d;
  const Real step = c.point - m.center();
  c.model_change = m.change_at_step(step);
  c.model_value = m.taylor().terms[0] + c.model_change;
  c.model_grad_norm = abs(m.gradient_at_step(step));
  c.kind = kind;
  return c;
}

CandidateKind classify(int before, int after) {
  if (before == 0 || after == 0) return CandidateKind::boundary_artifact;
  if (before < 0 && after > 0) return CandidateKind::strict_local_min;
  return CandidateKind::saddle_or_max;
}

Real enclosure(const Polynomial1D& a, const Polynomial1D& b) {
  Real bound(1);
  if (a.degree() >= 1) bound = max(bound, a.cauchy_bound());
  if (b.degree() >= 1) bound = max(bound, b.cauchy_bound());
  return bound;
}

}  // namespace

std::vector<CandidateMinimizer> critical_points_1d(const RegularizedModel& m) {
  const Polynomial1D right = m.right_branch().derivative();
  const Polynomial1D left = m.left_branch().derivative();
  if (right.is_zero() && left.is_zero()) throw DomainError("model is constant; no isolated critical points");
  const Real bound = enclosure(right, left);

  const auto rroots = isolate_roots(right, Real(0), bound);
  const auto lroots = isolate_roots(left, -bound, Real(0));

  std::vector<CandidateMinimizer> out;
  int zero_before = 0;
  int zero_after = 0;
  bool zero_root = false;
  for (const auto& r : lroots) {
    if (r.root.is_zero()) {
      zero_root = true;
      zero_before = r.sign_before;
    } else {
      out.push_back(make_candidate(m, r.root, classify(r.sign_before, r.sign_after)));
    }
  }
  for (const auto& r : rroots) {
    if (r.root.is_zero()) {
      zero_root = true;
      zero_after = r.sign_after;
    } else {
      out.push_back(make_candidate(m, r.root, classify(r.sign_before, r.sign_after)));
    }
  }
  if (zero_root) out.push_back(make_candidate(m, Real(0), classify(zero_before, zero_after)));

  const Real& x = m.center();
  std::stable_sort(out.begin(), out.end(), [&x](const CandidateMinimizer& a, const CandidateMinimizer& b) {
    if (a.model_change < b.model_change) return true;
    if (b.model_change < a.model_change) return false;
    return abs(a.point - x) < abs(b.point - x);
  });
  return out;
}

CandidateMinimizer descend_component(const RegularizedModel& m, const Real& theta, const Real& inner_tol,
                                     std::vector<Real>* path) {
  const Real g0 = m.gradient_at_step(Real(0));
  if (g0.is_zero()) throw DomainError("descend_component needs a nonzero model gradient at the expansion point");
  const int dir = g0.sign() > 0 ? -1 : 1;
  const Real s(dir);
  const Polynomial1D slope = dir > 0 ? m.right_branch().derivative() : m.left_branch().derivative();
  const int bits = g0.precision();

  auto done = [&](const Real& d) {
    const Real tol = max(theta * pow(abs(d), static_cast<long>(m.order())), inner_tol);
    return abs(m.gradient_at_step(d)) <= tol;
  };

  Real cur(0);
  Real mcur(0);
  if (path) path->push_back(mcur);

  Real curvature = abs(Real(2) * (m.taylor().terms.size() > 2 ? m.taylor().terms[2] : Real(0)));
  Real h = curvature.is_zero() ? Real(1) : min(abs(g0) / curvature, Real(1));
  const Real floor = Real::pow2(-4L * bits);

  // Expand or backtrack until a step would reach the first critical point.
  std::optional<IsolatedRoot> target;
  for (int iter = 0; !target; ++iter) {
    if (iter > 8 * bits) throw SubsolverError("descent diverges: model unbounded along the descent direction");
    Real cand = cur + s * h;
    auto roots = dir > 0 ? isolate_roots(slope, cur, cand) : isolate_roots(slope, cand, cur);
    if (dir < 0) std::reverse(roots.begin(), roots.end());
    for (auto& r : roots) {
      // Touching zeros of m' are inflections; descent passes through them.
      if (r.sign_before != 0 && r.sign_before == r.sign_after) continue;
      target = std::move(r);
      break;
    }
    if (target) break;
    Real mc = m.change_at_step(cand);
    if (mc < mcur) {
      cur = std::move(cand);
      mcur = std::move(mc);
      if (path) path->push_back(mcur);
      if (done(cur)) return make_candidate(m, cur, CandidateKind::strict_local_min);
      h *= Real(2);
    } else {
      h /= Real(2);
      if (h < floor * max(Real(1), abs(cur))) {
        throw SubsolverError("descent stalls: step size underflow with |m'| = " +
                             abs(m.gradient_at_step(cur)).to_string(6));
      }
    }
  }

  if (target->bracket_lo == target->bracket_hi) {
    // Exact critical point.
    Real mc = m.change_at_step(target->root);
    if (mc < mcur) {
      if (path) path->push_back(mc);
      return make_candidate(m, target->root, CandidateKind::strict_local_min);
    }
    return make_candidate(m, cur, CandidateKind::strict_local_min);
  }

  // Bisect on the sign of m' between cur and the far end of the root's bracket.
  Real lo = cur;
  Real hi = dir > 0 ? target->bracket_hi : target->bracket_lo;
  while (!done(lo)) {
    Real mid = (lo + hi) / Real(2);
    if (mid == lo || mid == hi) break;
    if ((s * slope(mid)).sign() < 0) {
      // Near the critical point the change is flat below rounding; the slope sign decides.
      Real mm = m.change_at_step(mid);
      lo = std::move(mid);
      if (mm < mcur) {
        mcur = std::move(mm);
        if (path) path->push_back(mcur);
      }
    } else {
      hi = std::move(mid);
    }
  }
  if (!(mcur.sign() < 0)) throw SubsolverError("descent stalls: no model decrease at working precision");
  return make_candidate(m, lo, CandidateKind::strict_local_min);
}

std::string policy_name(const SelectionPolicy& policy) {
  struct Visitor {
    std::string operator()(const GlobalMin&) const { return "global"; }
    std::string operator()(const LocalComponent&) const { return "component"; }
    std::string operator()(const NearestToRef&) const { return "nearest_ref"; }
    std::string operator()(const ClosedFormExampleB&) const { return "closed_form_b"; }
  };
  return std::visit(Visitor{}, policy);
}

Real theta_slack(const RegularizedModel& m, const Real& y) {
  const Real d = abs(y - m.center());
  return Real::pow2(-(d.precision() / 2)) * max(Real(1), pow(d, static_cast<long>(m.order())));
}

bool verify_theta_condition(const RegularizedModel& m, const Real& y, const Real& theta, const Real& slack) {
  const Real d = y - m.center();
  if (!(m.change_at_step(d).sign() < 0)) return false;
  return abs(m.gradient_at_step(d)) <= theta * pow(abs(d), static_cast<long>(m.order())) + slack;
}

namespace {

std::vector<CandidateMinimizer> descending_minima(const RegularizedModel& m) {
  std::vector<CandidateMinimizer> out;
  for (auto& c : critical_points_1d(m)) {
    if (c.kind == CandidateKind::strict_local_min && c.model_change.sign() < 0) out.push_back(std::move(c));
  }
  if (out.empty()) throw SubsolverError("model has no local minimizer below its value at the expansion point");
  return out;
}

Real choose(const GlobalMin&, const RegularizedModel& m, const Real&) { return descending_minima(m).front().point; }

Real choose(const LocalComponent&, const RegularizedModel& m, const Real& theta) {
  return descend_component(m, theta, Real(0)).point;
}

Real choose(const NearestToRef& policy, const RegularizedModel& m, const Real&) {
  const auto minima = descending_minima(m);
  const CandidateMinimizer* best = &minima.front();
  for (const auto& c : minima) {
    if (abs(c.point - policy.ref) < abs(best->point - policy.ref)) best = &c;
  }
  return best->point;
}

Real choose(const ClosedFormExampleB& policy, const RegularizedModel& m, const Real&) {
  if (m.order() != policy.p) {
    throw SubsolverError("closed_form_b policy built for p = " + std::to_string(policy.p) + " used with order " +
                         std::to_string(m.order()));
  }
  const Real& x = m.center();
  if (x.is_zero()) throw SubsolverError("closed_form_b step undefined at x = 0");
  Real mag = pow_rational(abs(x), policy.p, policy.q - 1);
  return x.sign() > 0 ? -mag : mag;
}

}  // namespace

Selection select(const SelectionPolicy& policy, const RegularizedModel& m, const Real& theta) {
  Real y = std::visit([&](const auto& p) { return choose(p, m, theta); }, policy);
  if (!verify_theta_condition(m, y, theta, theta_slack(m, y))) {
    throw SubsolverError("policy '" + policy_name(policy) + "' produced y = " + y.to_string(20) +
                         " violating the approximate-minimizer condition");
  }
  Real g = abs(m.gradient(y));
  return {std::move(y), std::move(g)};
}

}  // namespace arp
