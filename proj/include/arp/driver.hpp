#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arp/model.hpp"
#include "arp/objective.hpp"
#include "arp/real.hpp"
#include "arp/subsolver.hpp"

namespace arp {

enum class IterationStatus { very_successful, successful, unsuccessful };

/// 'V', 'S' or 'U'.
[[nodiscard]] char status_code(IterationStatus status);
/// Inverse of status_code; DomainError otherwise.
[[nodiscard]] IterationStatus status_from_code(char code);
[[nodiscard]] inline bool accepted(IterationStatus s) { return s != IterationStatus::unsuccessful; }

struct StopRule {
  std::optional<Real> grad_tol;
  /// Needs objective metadata.
  std::optional<Real> dist_tol;
};

struct ArpConfig {
  int p = 3;
  Real eta1 = Real::rational(1, 2);
  Real eta2 = Real::rational(1, 2);
  Real gamma1 = Real::rational(1, 2);
  Real gamma2 = Real(2);
  Real theta = Real(0);
  Real sigma0 = Real::rational(1, 2);
  std::optional<Real> sigma_min;
  SelectionPolicy policy = LocalComponent{};
  int max_iterations = 1000;
  StopRule stop;

  /// DomainError on parameters outside 0 < eta1 <= eta2 < 1, 0 < gamma1 <= 1 < gamma2,
  /// theta >= 0, sigma0 > 0, p >= 2, max_iterations >= 0.
  void validate() const;
};

enum class Termination { exact_zero_gradient, grad_tol, dist_tol, max_iterations };

[[nodiscard]] std::string to_string(Termination t);
[[nodiscard]] Termination termination_from_string(const std::string& s);

struct IterationRecord {
  int k = 0;
  Real x;
  Real f_value;
  std::optional<Real> f_gap;
  Real grad_norm;
  Real sigma;
  Real y;
  Real rho;
  IterationStatus status = IterationStatus::successful;
  Real step_norm;
  Real taylor_decrease;
  /// |m'(y)|, the subproblem residual behind the approximate-minimizer condition.
  std::optional<Real> model_grad_norm;
};

struct Trace {
  std::string solver;  // "arp" or "newton"
  std::string objective_id;
  std::optional<ArpConfig> config;
  int precision_bits = 0;
  std::vector<IterationRecord> records;
  Termination termination = Termination::max_iterations;
  Real final_x;
  Real final_sigma;
};

/// (f(x) - f(y)) / (t(x) - t(y)) with the Taylor decrease taken from model_decrease.
/// NumericContractError if the predicted decrease is not positive.
[[nodiscard]] Real compute_rho(const ObjectiveSpec& f, const RegularizedModel& m, const Real& y);

struct ArpState {
  Real x;
  Real sigma;
};

struct StepResult {
  ArpState next;
  IterationRecord record;
};

/// One iteration from (x, sigma); requires f'(x) != 0.
[[nodiscard]] StepResult arp_step(const ArpState& state, const ArpConfig& cfg, const ObjectiveSpec& f, int k = 0);

/// Iterates arp_step until a stop rule fires or max_iterations is reached.
[[nodiscard]] Trace run(const ArpConfig& cfg, const ObjectiveSpec& f, const Real& x0);

/// max(sigma0, gamma2 L_p / ((1 - eta1) (p+1)!)).
[[nodiscard]] Real sigma_max_bound(const ArpConfig& cfg, const Real& L_p);
/// L_p / ((1 - eta1) (p+1)!): iterations at or above this sigma always succeed.
[[nodiscard]] Real success_threshold(const ArpConfig& cfg, const Real& L_p);

}  // namespace arp
