#include "arp/newton.hpp"

#include "arp/errors.hpp"

namespace arp {

Trace newton_run(const ObjectiveSpec& f, const Real& x0, const NewtonConfig& cfg) {
  if (f.p_max < 2) throw DomainError("Newton's method needs second derivatives");
  if (cfg.stop.dist_tol && !f.meta) throw DomainError("dist_tol needs an objective with a known minimizer");
  Trace trace;
  trace.solver = "newton";
  trace.objective_id = f.id;
  trace.precision_bits = x0.precision();
  Real x = x0;
  for (int k = 0;; ++k) {
    const Real g = f.derivative(1, x);
    if (g.is_zero()) {
      trace.termination = Termination::exact_zero_gradient;
      break;
    }
    if (cfg.stop.grad_tol && abs(g) <= *cfg.stop.grad_tol) {
      trace.termination = Termination::grad_tol;
      break;
    }
    if (cfg.stop.dist_tol && abs(x - f.meta->x_star) < *cfg.stop.dist_tol) {
      trace.termination = Termination::dist_tol;
      break;
    }
    if (k >= cfg.max_iterations) {
      trace.termination = Termination::max_iterations;
      break;
    }
    const Real h = f.derivative(2, x);
    if (h.is_zero()) throw NumericContractError("Newton step with zero second derivative at x = " + x.to_string(20));
    IterationRecord rec;
    rec.k = k;
    rec.x = x;
    rec.f_value = f.value(x);
    if (f.meta) rec.f_gap = f.gap(x);
    rec.grad_norm = abs(g);
    rec.sigma = Real(0);
    rec.y = x - g / h;
    const Real d = rec.y - x;
    rec.step_norm = abs(d);
    rec.taylor_decrease = -(g * d + h * d * d / Real(2));
    rec.rho = rec.taylor_decrease.is_zero() ? Real(1) : f.decrease(x, rec.y) / rec.taylor_decrease;
    rec.status = IterationStatus::successful;
    x = rec.y;
    trace.records.push_back(std::move(rec));
  }
  trace.final_x = x;
  trace.final_sigma = Real(0);
  return trace;
}

}  // namespace arp
