#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arp/driver.hpp"
#include "arp/objective.hpp"
#include "arp/real.hpp"

namespace arp {

enum class OrderMode { successful_only, all_iterations };
enum class ErrorMetric { distance, grad_norm, f_gap };

struct OrderEstimate {
  /// log(e_{k+1}) / log(e_k) over consecutive usable errors.
  std::vector<Real> q_ratios;
  /// Median of the last min(5, available) ratios, leaving out ratios whose newer error
  /// belongs to the last two input entries (all ratios when nothing else remains).
  Real tail_q_order;
  /// exp of the least-squares slope of log log(1/e_k) against k.
  Real r_order;
  int samples_used = 0;
};

/// Only errors with 0 < e < 1 are used. successful_only drops repeated values (rejected
/// iterations leave the iterate unchanged) and then needs a strictly decreasing sequence;
/// all_iterations needs a non-increasing one.
/// DomainError with fewer than 3 usable errors or a sequence that increases.
[[nodiscard]] OrderEstimate estimate_order(const std::vector<Real>& errors, OrderMode mode);

/// Error of every iterate x_0, x_1, ..., final_x of a trace, one entry per iteration;
/// rejected iterations repeat the previous error.
[[nodiscard]] std::vector<Real> trace_errors(const Trace& trace, const ObjectiveSpec& f, ErrorMetric metric);

struct CycleReport {
  bool detected = false;
  int preperiod = 0;
  int period = 0;
  std::vector<Real> sigma_cycle;
  int unsuccessful_count = 0;
  int successful_count = 0;
  /// gamma1 = gamma2^(-a/b) when such a/b with b <= 64 exists; sigma values are then compared
  /// by their integer exponent c with sigma = sigma0 gamma2^(c/b).
  std::optional<std::pair<long, long>> alpha;
  std::string note;

  /// unsuccessful / successful inside the cycle, -1 without successes.
  [[nodiscard]] double ratio() const;
};

/// Smallest period (then smallest preperiod) for which the (sigma, status) sequence repeats
/// over at least two periods and four records at the end of the trace.
[[nodiscard]] CycleReport detect_cycle(const Trace& trace);

/// a/b with b <= 64 and gamma1 = gamma2^(-a/b) at working precision, or nothing.
[[nodiscard]] std::optional<std::pair<long, long>> rational_alpha(const Real& gamma1, const Real& gamma2);

/// Bisection for the smallest sigma at which the global minimum of the regularized model
/// at x_star equals f(x_star). DomainError if the bracket does not straddle it.
[[nodiscard]] Real estimate_sigma_star(const ObjectiveSpec& f, int p, const Real& lo, const Real& hi, const Real& tol);

/// Global minimum of m_{x_star, sigma} minus f(x_star).
[[nodiscard]] Real model_excess_at_minimizer(const ObjectiveSpec& f, int p, const Real& sigma);

struct AuditCheck {
  std::string name;
  bool applicable = false;
  bool passed = true;
  int checked = 0;
  /// Smallest (rhs - lhs) / max(|lhs|, |rhs|) seen.
  std::optional<Real> worst_relative_margin;
  int first_violation = -1;
  std::string note;
};

struct AuditReport {
  std::vector<AuditCheck> checks;

  [[nodiscard]] bool passed() const;
  /// nullptr if absent.
  [[nodiscard]] const AuditCheck* find(const std::string& name) const;
};

/// Checks sigma_ceiling, guaranteed_success, gradient_bound, success_count, monotone_objective,
/// growth, gradient_growth and gradient_domination against the objective's metadata.
/// An inequality passes when its margin is at least minus a rounding allowance.
[[nodiscard]] AuditReport audit_trace(const Trace& trace, const ObjectiveSpec& f);

}  // namespace arp
