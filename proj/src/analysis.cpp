#include "arp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "arp/errors.hpp"
#include "arp/model.hpp"
#include "arp/subsolver.hpp"

namespace arp {

namespace {

Real median(std::vector<Real> v) {
  std::sort(v.begin(), v.end(), [](const Real& a, const Real& b) { return a < b; });
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]) / Real(2);
}

}  // namespace

OrderEstimate estimate_order(const std::vector<Real>& errors, OrderMode mode) {
  // Usable samples with their index in the input.
  std::vector<Real> e;
  std::vector<std::size_t> at;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const Real& v = errors[i];
    if (!(v.sign() > 0 && v < Real(1))) continue;
    if (mode == OrderMode::successful_only && !e.empty() && v == e.back()) continue;
    e.push_back(v);
    at.push_back(i);
  }
  if (e.size() < 3) throw DomainError("estimate_order needs at least 3 errors in (0, 1), got " + std::to_string(e.size()));
  for (std::size_t i = 1; i < e.size(); ++i) {
    const bool ok = mode == OrderMode::successful_only ? e[i] < e[i - 1] : e[i] <= e[i - 1];
    if (!ok) throw DomainError("error sequence increases at sample " + std::to_string(i));
  }

  OrderEstimate out;
  out.samples_used = static_cast<int>(e.size());
  std::vector<Real> logs;
  for (const auto& v : e) logs.push_back(log(v));
  std::vector<Real> pool;
  const std::size_t cutoff = errors.size() >= 2 ? errors.size() - 2 : 0;
  for (std::size_t i = 0; i + 1 < logs.size(); ++i) {
    out.q_ratios.push_back(logs[i + 1] / logs[i]);
    if (at[i + 1] < cutoff) pool.push_back(out.q_ratios.back());
  }
  if (pool.empty()) pool = out.q_ratios;
  const std::size_t m = std::min<std::size_t>(5, pool.size());
  out.tail_q_order = median(std::vector<Real>(pool.end() - static_cast<long>(m), pool.end()));

  // Least squares of log log(1/e_k) on k.
  const Real n(static_cast<long>(e.size()));
  Real sk(0), sy(0), skk(0), sky(0);
  for (std::size_t k = 0; k < e.size(); ++k) {
    const Real kk(static_cast<long>(k));
    const Real y = log(-logs[k]);
    sk += kk;
    sy += y;
    skk += kk * kk;
    sky += kk * y;
  }
  const Real slope = (n * sky - sk * sy) / (n * skk - sk * sk);
  out.r_order = exp(slope);
  return out;
}

std::vector<Real> trace_errors(const Trace& trace, const ObjectiveSpec& f, ErrorMetric metric) {
  auto err = [&](const Real& x) -> Real {
    switch (metric) {
      case ErrorMetric::distance: return abs(x - f.require_meta().x_star);
      case ErrorMetric::grad_norm: return abs(f.derivative(1, x));
      case ErrorMetric::f_gap: return abs(f.gap(x));
    }
    return Real(0);
  };
  std::vector<Real> out;
  for (const auto& r : trace.records) out.push_back(err(r.x));
  out.push_back(err(trace.final_x));
  return out;
}

double CycleReport::ratio() const {
  if (successful_count == 0) return -1.0;
  return static_cast<double>(unsuccessful_count) / successful_count;
}

std::optional<std::pair<long, long>> rational_alpha(const Real& gamma1, const Real& gamma2) {
  if (gamma1 == Real(1)) return std::make_pair(0L, 1L);
  if (!(gamma1.sign() > 0 && gamma1 < Real(1) && gamma2 > Real(1))) return std::nullopt;
  const Real alpha = -log(gamma1) / log(gamma2);
  const Real tol = Real::pow2(-(alpha.precision() / 2));
  for (long b = 1; b <= 64; ++b) {
    const Real ab = alpha * Real(b);
    const long a = std::lround(ab.to_double());
    if (a > 0 && abs(ab - Real(a)) <= tol * Real(b)) return std::make_pair(a, b);
  }
  return std::nullopt;
}

CycleReport detect_cycle(const Trace& trace) {
  CycleReport rep;
  const auto& recs = trace.records;
  const std::size_t n = recs.size();
  if (n < 8) {
    rep.note = "trace shorter than 8 records";
    return rep;
  }

  // Symbol per record: sigma class and status.
  std::vector<long> cls(n);
  bool grid = false;
  if (trace.config) {
    rep.alpha = rational_alpha(trace.config->gamma1, trace.config->gamma2);
    if (rep.alpha && !trace.config->sigma_min) {
      grid = true;
      const Real lg = log(trace.config->gamma2);
      const Real b(rep.alpha->second);
      const Real tol = Real::pow2(-(lg.precision() / 4));
      for (std::size_t i = 0; i < n && grid; ++i) {
        const Real c = b * log(recs[i].sigma / trace.config->sigma0) / lg;
        const long ci = std::lround(c.to_double());
        if (abs(c - Real(ci)) > tol) grid = false;
        cls[i] = ci;
      }
    }
  }
  if (!grid) {
    rep.note = "sigma compared by relative equality";
    std::vector<Real> reps;
    const Real tol = Real::pow2(-(recs[0].sigma.precision() / 2));
    for (std::size_t i = 0; i < n; ++i) {
      long found = -1;
      for (std::size_t j = 0; j < reps.size(); ++j) {
        if (abs(recs[i].sigma - reps[j]) <= tol * max(abs(reps[j]), abs(recs[i].sigma))) found = static_cast<long>(j);
      }
      if (found < 0) {
        reps.push_back(recs[i].sigma);
        found = static_cast<long>(reps.size()) - 1;
      }
      cls[i] = found;
    }
  }
  auto same = [&](std::size_t i, std::size_t j) { return cls[i] == cls[j] && recs[i].status == recs[j].status; };

  for (std::size_t period = 1; 2 * period <= n; ++period) {
    // Longest periodic suffix: walk back while seq[k] == seq[k + period].
    std::size_t mu = n - period;
    while (mu > 0 && same(mu - 1, mu - 1 + period)) --mu;
    const std::size_t tail = n - mu;
    if (tail >= 2 * period && tail >= 4) {
      rep.detected = true;
      rep.preperiod = static_cast<int>(mu);
      rep.period = static_cast<int>(period);
      for (std::size_t k = mu; k < mu + period; ++k) {
        rep.sigma_cycle.push_back(recs[k].sigma);
        if (accepted(recs[k].status)) {
          ++rep.successful_count;
        } else {
          ++rep.unsuccessful_count;
        }
      }
      return rep;
    }
  }
  rep.note += rep.note.empty() ? "no periodicity in window" : "; no periodicity in window";
  return rep;
}

Real model_excess_at_minimizer(const ObjectiveSpec& f, int p, const Real& sigma) {
  const ConvexityMeta& meta = f.require_meta();
  const RegularizedModel m(build_taylor(f, meta.x_star, p), sigma);
  Real best(0);
  for (const auto& c : critical_points_1d(m)) {
    if (c.kind == CandidateKind::strict_local_min) best = min(best, c.model_change);
  }
  return best;
}

Real estimate_sigma_star(const ObjectiveSpec& f, int p, const Real& lo_in, const Real& hi_in, const Real& tol) {
  (void)f.require_meta();
  if (f.dimension != 1) throw DomainError("estimate_sigma_star is one-dimensional");
  if (!(lo_in < hi_in) || tol.sign() <= 0) throw DomainError("estimate_sigma_star needs lo < hi and tol > 0");
  const Real delta = Real::pow2(-(tol.precision() / 2));
  auto below = [&](const Real& sigma) { return model_excess_at_minimizer(f, p, sigma) < -delta; };
  Real lo = lo_in;
  Real hi = hi_in;
  if (!below(lo) || below(hi)) {
    throw DomainError("bracket [" + lo.to_string(8) + ", " + hi.to_string(8) + "] does not straddle the threshold");
  }
  while (hi - lo > tol) {
    Real mid = (lo + hi) / Real(2);
    if (below(mid)) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  return (lo + hi) / Real(2);
}

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return !c.applicable || c.passed; });
}

const AuditCheck* AuditReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

// Records lhs <= rhs up to allowance.
void record(AuditCheck& c, int k, const Real& lhs, const Real& rhs, const Real& allowance) {
  c.applicable = true;
  ++c.checked;
  const Real margin = rhs - lhs;
  const Real scale = max(abs(lhs), abs(rhs));
  const Real rel = scale.is_zero() ? Real(0) : margin / scale;
  if (!c.worst_relative_margin || rel < *c.worst_relative_margin) c.worst_relative_margin = rel;
  if (margin < -allowance) {
    if (c.passed) c.first_violation = k;
    c.passed = false;
  }
}

AuditCheck skipped(const std::string& name, const std::string& why) {
  AuditCheck c;
  c.name = name;
  c.note = why;
  return c;
}

}  // namespace

AuditReport audit_trace(const Trace& trace, const ObjectiveSpec& f) {
  AuditReport rep;
  if (!f.meta) {
    rep.checks.push_back(skipped("metadata", "objective has no metadata"));
    return rep;
  }
  const ConvexityMeta& meta = *f.meta;
  const auto& recs = trace.records;
  const int bits = trace.final_x.precision();
  const Real rnd = Real::pow2(-(bits - 16));
  auto next_x = [&](std::size_t i) -> const Real& { return i + 1 < recs.size() ? recs[i + 1].x : trace.final_x; };

  const bool arp = trace.solver == "arp" && trace.config.has_value();
  const bool lip = arp && meta.lipschitz_order == trace.config->p;
  const std::string no_lip = arp ? "metadata Lipschitz constant is for another order" : "not an AR(p) trace";

  if (lip) {
    const ArpConfig& cfg = *trace.config;
    const Real smax = sigma_max_bound(cfg, meta.L_p);
    const Real thresh = success_threshold(cfg, meta.L_p);
    AuditCheck ceiling;
    ceiling.name = "sigma_ceiling";
    AuditCheck success;
    success.name = "guaranteed_success";
    AuditCheck grad;
    grad.name = "gradient_bound";
    ceiling.applicable = success.applicable = grad.applicable = true;
    const Real pf = Real::factorial(cfg.p);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      const int k = r.k;
      record(ceiling, k, r.sigma, smax, rnd * smax);
      if (r.sigma >= thresh) record(success, k, cfg.eta1, r.rho, rnd);
      if (accepted(r.status)) {
        const Real& y = next_x(i);
        const Real dp = pow(r.step_norm, static_cast<long>(cfg.p));
        const Real R = meta.L_p / pf + cfg.theta + Real(cfg.p + 1) * r.sigma;
        const Real lhs = abs(f.derivative(1, y));
        const Real rhs = R * dp;
        Real residual_allow(0);
        if (cfg.theta.is_zero()) {
          residual_allow = r.model_grad_norm ? *r.model_grad_norm
                                              : Real::pow2(-(bits / 2)) * max(Real(1), dp);
        }
        record(grad, k, lhs, rhs, rnd * (f.evaluation_scale(1, y) + rhs) + residual_allow);
      }
    }
    rep.checks.push_back(ceiling);
    rep.checks.push_back(success);
    rep.checks.push_back(grad);

    AuditCheck count;
    count.name = "success_count";
    if (auto alpha = rational_alpha(cfg.gamma1, cfg.gamma2); alpha && !cfg.sigma_min) {
      const Real a = Real(alpha->first) / Real(alpha->second);
      const Real shift = log(smax / cfg.sigma0) / ((a + Real(1)) * log(cfg.gamma2));
      int s = 0;
      for (std::size_t i = 0; i < recs.size(); ++i) {
        if (accepted(recs[i].status)) ++s;
        const Real k(static_cast<long>(i + 1));
        record(count, static_cast<int>(i + 1), k / (a + Real(1)) - shift, Real(s), rnd * k);
      }
    } else {
      count.note = "gamma1 is not a rational power of gamma2";
    }
    rep.checks.push_back(count);
  } else {
    for (const char* name : {"sigma_ceiling", "guaranteed_success", "gradient_bound", "success_count"}) {
      rep.checks.push_back(skipped(name, no_lip));
    }
  }

  AuditCheck mono;
  mono.name = "monotone_objective";
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const Real& y = next_x(i);
    if (accepted(recs[i].status)) {
      record(mono, recs[i].k, Real(0), f.decrease(recs[i].x, y), rnd * f.evaluation_scale(0, recs[i].x));
    } else {
      mono.applicable = true;
      ++mono.checked;
      if (!(y == recs[i].x)) {
        if (mono.passed) mono.first_violation = recs[i].k;
        mono.passed = false;
      }
    }
  }
  rep.checks.push_back(mono);

  // Uniform convexity consequences along the iterates inside the ball.
  AuditCheck growth;
  growth.name = "growth";
  AuditCheck ggrowth;
  ggrowth.name = "gradient_growth";
  AuditCheck dom;
  dom.name = "gradient_domination";
  const Real mu = meta.mu_q;
  const Real q(meta.q);
  const Real dom_coeff = (q - Real(1)) / q * pow_rational(Real(1) / mu, 1, meta.q - 1);
  auto visit = [&](int k, const Real& x) {
    const Real e = abs(x - meta.x_star);
    if (e > meta.r_q) return;
    const Real gap = f.gap(x);
    const Real g = abs(f.derivative(1, x));
    const Real gap_allow = rnd * (abs(gap) + f.evaluation_scale(1, x) * e);
    const Real g_allow = rnd * f.evaluation_scale(1, x);
    const Real lower = mu / q * pow(e, static_cast<long>(meta.q));
    record(growth, k, lower, gap, gap_allow + rnd * lower);
    const Real glower = mu * pow(e, static_cast<long>(meta.q - 1));
    record(ggrowth, k, glower, g, g_allow + rnd * glower);
    const Real upper = dom_coeff * pow_rational(g, meta.q, meta.q - 1);
    record(dom, k, gap, upper, gap_allow + rnd * upper + Real(2) * dom_coeff * g_allow * pow_rational(g, 1, meta.q - 1));
  };
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (i == 0 || accepted(recs[i - 1].status)) visit(recs[i].k, recs[i].x);
  }
  visit(static_cast<int>(recs.size()), trace.final_x);
  for (auto* c : {&growth, &ggrowth, &dom}) {
    if (!c->applicable) c->note = "no iterate inside the convexity ball";
    rep.checks.push_back(*c);
  }
  return rep;
}

}  // namespace arp
