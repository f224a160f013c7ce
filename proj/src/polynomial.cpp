#include "arp/polynomial.hpp"

#include <algorithm>

#include "arp/errors.hpp"

namespace arp {

Polynomial1D::Polynomial1D(std::vector<Real> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

Polynomial1D Polynomial1D::from_strings(const std::vector<std::string>& coefficients) {
  std::vector<Real> c;
  c.reserve(coefficients.size());
  for (const auto& s : coefficients) c.push_back(Real::from_string(s));
  return Polynomial1D(std::move(c));
}

Polynomial1D Polynomial1D::monomial(const Real& c, int n) {
  if (n < 0) throw DomainError("monomial with negative degree");
  std::vector<Real> coeffs(static_cast<std::size_t>(n) + 1, Real(0));
  coeffs[static_cast<std::size_t>(n)] = c;
  return Polynomial1D(std::move(coeffs));
}

void Polynomial1D::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Real horner(const std::vector<Real>& c, const Real& s) {
  if (c.empty()) return Real(0);
  Real acc = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    acc *= s;
    acc += c[i];
  }
  return acc;
}

Real Polynomial1D::operator()(const Real& t) const { return horner(coeffs_, t); }

Polynomial1D Polynomial1D::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Real> d;
  d.reserve(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * Real(static_cast<long>(i)));
  return Polynomial1D(std::move(d));
}

Real Polynomial1D::derivative_at(int order, const Real& t) const {
  if (order < 0) throw DomainError("negative derivative order");
  if (order > degree()) return Real(0);
  Polynomial1D d = *this;
  for (int i = 0; i < order; ++i) d = d.derivative();
  return d(t);
}

// Repeated synthetic division by (s - t).
std::vector<Real> Polynomial1D::taylor_coefficients(const Real& t) const {
  std::vector<Real> c = coeffs_;
  const std::size_t n = c.size();
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t i = n - 1; i > j; --i) c[i - 1] += t * c[i];
  }
  return c;
}

Real Polynomial1D::magnitude_at(const Real& t) const {
  Real at = abs(t);
  Real acc(0);
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    acc *= at;
    acc += abs(coeffs_[i]);
  }
  return acc;
}

Real Polynomial1D::cauchy_bound() const {
  if (degree() < 1) throw DomainError("root bound of a constant polynomial");
  Real m(0);
  const Real lead = abs(leading());
  for (int i = 0; i < degree(); ++i) m = max(m, abs(coeffs_[static_cast<std::size_t>(i)]) / lead);
  return Real(1) + m;
}

Polynomial1D operator+(const Polynomial1D& a, const Polynomial1D& b) {
  const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  std::vector<Real> c(n, Real(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return Polynomial1D(std::move(c));
}

Polynomial1D operator*(const Real& c, const Polynomial1D& a) {
  std::vector<Real> out = a.coeffs_;
  for (auto& v : out) v *= c;
  return Polynomial1D(std::move(out));
}

}  // namespace arp
