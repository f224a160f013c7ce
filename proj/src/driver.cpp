#include "arp/driver.hpp"

#include "arp/errors.hpp"

namespace arp {

char status_code(IterationStatus status) {
  switch (status) {
    case IterationStatus::very_successful: return 'V';
    case IterationStatus::successful: return 'S';
    case IterationStatus::unsuccessful: return 'U';
  }
  return '?';
}

IterationStatus status_from_code(char code) {
  switch (code) {
    case 'V': return IterationStatus::very_successful;
    case 'S': return IterationStatus::successful;
    case 'U': return IterationStatus::unsuccessful;
    default: throw DomainError(std::string("unknown iteration status '") + code + "'");
  }
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::exact_zero_gradient: return "exact_zero_gradient";
    case Termination::grad_tol: return "grad_tol";
    case Termination::dist_tol: return "dist_tol";
    case Termination::max_iterations: return "max_iterations";
  }
  return "unknown";
}

Termination termination_from_string(const std::string& s) {
  for (auto t : {Termination::exact_zero_gradient, Termination::grad_tol, Termination::dist_tol,
                 Termination::max_iterations}) {
    if (to_string(t) == s) return t;
  }
  throw DomainError("unknown termination reason '" + s + "'");
}

void ArpConfig::validate() const {
  if (p < 2) throw DomainError("p must be at least 2");
  if (!(eta1.sign() > 0 && eta1 <= eta2 && eta2 < Real(1))) throw DomainError("need 0 < eta1 <= eta2 < 1");
  if (!(gamma1.sign() > 0 && gamma1 <= Real(1))) throw DomainError("need 0 < gamma1 <= 1");
  if (!(gamma2 > Real(1))) throw DomainError("need gamma2 > 1");
  if (theta.sign() < 0) throw DomainError("need theta >= 0");
  if (sigma0.sign() <= 0) throw DomainError("need sigma0 > 0");
  if (sigma_min && sigma_min->sign() <= 0) throw DomainError("need sigma_min > 0");
  if (max_iterations < 0) throw DomainError("max_iterations must be nonnegative");
  if (stop.grad_tol && stop.grad_tol->sign() < 0) throw DomainError("grad_tol must be nonnegative");
  if (stop.dist_tol && stop.dist_tol->sign() <= 0) throw DomainError("dist_tol must be positive");
}

Real compute_rho(const ObjectiveSpec& f, const RegularizedModel& m, const Real& y) {
  const ModelDecrease dec = model_decrease(m, y);
  if (!(dec.taylor_decrease.sign() > 0)) {
    throw NumericContractError("nonpositive predicted decrease " + dec.taylor_decrease.to_string(6) +
                               " at y = " + y.to_string(20));
  }
  return f.decrease(m.center(), y) / dec.taylor_decrease;
}

StepResult arp_step(const ArpState& state, const ArpConfig& cfg, const ObjectiveSpec& f, int k) {
  IterationRecord rec;
  rec.k = k;
  rec.x = state.x;
  rec.sigma = state.sigma;
  rec.f_value = f.value(state.x);
  if (f.meta) rec.f_gap = f.gap(state.x);
  rec.grad_norm = abs(f.derivative(1, state.x));
  if (rec.grad_norm.is_zero()) throw DomainError("arp_step called at a stationary point");

  RegularizedModel m(build_taylor(f, state.x, cfg.p), state.sigma);
  Selection sel = select(cfg.policy, m, cfg.theta);
  rec.y = sel.y;
  rec.model_grad_norm = sel.model_grad_norm;
  rec.step_norm = abs(sel.y - state.x);
  rec.taylor_decrease = model_decrease(m, sel.y).taylor_decrease;
  rec.rho = compute_rho(f, m, sel.y);

  ArpState next = state;
  if (rec.rho >= cfg.eta2) {
    rec.status = IterationStatus::very_successful;
    next.x = sel.y;
    next.sigma = cfg.gamma1 * state.sigma;
    if (cfg.sigma_min) next.sigma = max(next.sigma, *cfg.sigma_min);
  } else if (rec.rho >= cfg.eta1) {
    rec.status = IterationStatus::successful;
    next.x = sel.y;
  } else {
    rec.status = IterationStatus::unsuccessful;
    next.sigma = cfg.gamma2 * state.sigma;
  }
  return {std::move(next), std::move(rec)};
}

namespace {

std::optional<Termination> should_stop(const ArpConfig& cfg, const ObjectiveSpec& f, const Real& x, int k) {
  const Real g = abs(f.derivative(1, x));
  if (g.is_zero()) return Termination::exact_zero_gradient;
  if (cfg.stop.grad_tol && g <= *cfg.stop.grad_tol) return Termination::grad_tol;
  if (cfg.stop.dist_tol && abs(x - f.require_meta().x_star) < *cfg.stop.dist_tol) return Termination::dist_tol;
  if (k >= cfg.max_iterations) return Termination::max_iterations;
  return std::nullopt;
}

}  // namespace

Trace run(const ArpConfig& cfg, const ObjectiveSpec& f, const Real& x0) {
  cfg.validate();
  if (cfg.stop.dist_tol && !f.meta) throw DomainError("dist_tol needs an objective with a known minimizer");
  if (f.dimension != 1) throw DomainError("only one-dimensional objectives are supported");
  if (const auto* cf = std::get_if<ClosedFormExampleB>(&cfg.policy)) {
    const std::string expected = "exampleB(" + std::to_string(cf->p) + "," + std::to_string(cf->q) + ")";
    if (f.id != expected || cf->p != cfg.p) {
      throw DomainError("closed_form_b policy applies only to " + expected + " with p = " + std::to_string(cf->p));
    }
  }
  Trace trace;
  trace.solver = "arp";
  trace.objective_id = f.id;
  trace.config = cfg;
  trace.precision_bits = x0.precision();
  ArpState state{x0, cfg.sigma0};
  for (int k = 0;; ++k) {
    if (auto reason = should_stop(cfg, f, state.x, k)) {
      trace.termination = *reason;
      break;
    }
    StepResult step = arp_step(state, cfg, f, k);
    trace.records.push_back(std::move(step.record));
    state = std::move(step.next);
  }
  trace.final_x = state.x;
  trace.final_sigma = state.sigma;
  return trace;
}

Real success_threshold(const ArpConfig& cfg, const Real& L_p) {
  return L_p / ((Real(1) - cfg.eta1) * Real::factorial(cfg.p + 1));
}

Real sigma_max_bound(const ArpConfig& cfg, const Real& L_p) {
  if (L_p.sign() <= 0) throw DomainError("sigma_max_bound needs L_p > 0");
  return max(cfg.sigma0, cfg.gamma2 * success_threshold(cfg, L_p));
}

}  // namespace arp
