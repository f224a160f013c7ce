#pragma once

#include <string>
#include <variant>
#include <vector>

#include "arp/model.hpp"
#include "arp/real.hpp"

namespace arp {

enum class CandidateKind { strict_local_min, saddle_or_max, boundary_artifact };

[[nodiscard]] std::string to_string(CandidateKind kind);

struct CandidateMinimizer {
  Real point;
  Real model_value;      // m(point)
  Real model_change;     // m(point) - m(center), free of the constant term
  Real model_grad_norm;  // |m'(point)|
  CandidateKind kind = CandidateKind::strict_local_min;
};

/// All real critical points of a 1-D regularized model, found as roots of the derivative of
/// each polynomial branch and classified by the sign change of m'. Sorted by model value,
/// ties broken by distance to the expansion point.
/// DomainError if the model is constant.
[[nodiscard]] std::vector<CandidateMinimizer> critical_points_1d(const RegularizedModel& m);

/// Strictly monotone descent on m from its expansion point. Steps that would raise the
/// model value or cross a critical point are never accepted, so the path stays inside the
/// connected component of the sublevel set. Stops once |m'(y)| <= max(theta |d|^p, inner_tol)
/// or the bracket around the first critical point reaches working precision.
/// DomainError if m'(center) = 0; SubsolverError when the step size underflows.
/// `path`, when given, receives the model changes of the accepted points.
[[nodiscard]] CandidateMinimizer descend_component(const RegularizedModel& m, const Real& theta,
                                                   const Real& inner_tol, std::vector<Real>* path = nullptr);

struct GlobalMin {};
struct LocalComponent {};
struct NearestToRef {
  Real ref;
};
struct ClosedFormExampleB {
  int p = 4;
  int q = 4;
};

using SelectionPolicy = std::variant<GlobalMin, LocalComponent, NearestToRef, ClosedFormExampleB>;

/// "global", "component", "nearest_ref", "closed_form_b".
[[nodiscard]] std::string policy_name(const SelectionPolicy& policy);

/// Residual allowed on |m'(y)| on top of theta |d|^p: 2^-(bits/2) max(1, |d|^p).
[[nodiscard]] Real theta_slack(const RegularizedModel& m, const Real& y);

/// m(y) < m(center) and |m'(y)| <= theta |y - center|^p + slack.
[[nodiscard]] bool verify_theta_condition(const RegularizedModel& m, const Real& y, const Real& theta,
                                          const Real& slack);

struct Selection {
  Real y;
  Real model_grad_norm;
};

/// Picks the trial point under the policy and checks the approximate-minimizer condition.
/// SubsolverError if no admissible point exists at working precision.
[[nodiscard]] Selection select(const SelectionPolicy& policy, const RegularizedModel& m, const Real& theta);

}  // namespace arp
