#pragma once

#include <string>
#include <vector>

#include "arp/real.hpp"

namespace arp {

/// Univariate polynomial with coefficients in ascending degree.
/// Trailing zero coefficients are trimmed, so the zero polynomial has no coefficients.
class Polynomial1D {
 public:
  Polynomial1D() = default;
  explicit Polynomial1D(std::vector<Real> coefficients);

  /// Parses decimal strings; DomainError on malformed entries.
  static Polynomial1D from_strings(const std::vector<std::string>& coefficients);
  /// c * t^n.
  static Polynomial1D monomial(const Real& c, int n);

  [[nodiscard]] const std::vector<Real>& coefficients() const { return coeffs_; }
  /// -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] const Real& leading() const { return coeffs_.back(); }

  /// Horner evaluation.
  [[nodiscard]] Real operator()(const Real& t) const;
  [[nodiscard]] Polynomial1D derivative() const;
  /// order-th derivative at t (zero above the degree).
  [[nodiscard]] Real derivative_at(int order, const Real& t) const;
  /// Coefficients of s -> P(t + s): entry j is P^(j)(t) / j!.
  [[nodiscard]] std::vector<Real> taylor_coefficients(const Real& t) const;
  /// sum |a_i| |t|^i, the scale of the rounding error of a Horner evaluation at t.
  [[nodiscard]] Real magnitude_at(const Real& t) const;
  /// 1 + max |a_i / a_n|: every real root lies in [-bound, bound]. Requires degree >= 1.
  [[nodiscard]] Real cauchy_bound() const;

  friend Polynomial1D operator+(const Polynomial1D& a, const Polynomial1D& b);
  friend Polynomial1D operator*(const Real& c, const Polynomial1D& a);

 private:
  void trim();
  std::vector<Real> coeffs_;
};

/// Evaluates sum_j c[j] s^j by Horner's rule.
[[nodiscard]] Real horner(const std::vector<Real>& c, const Real& s);

}  // namespace arp
