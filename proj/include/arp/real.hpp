#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <mpfr.h>

namespace arp {

/// Binary precision of every Real created on the current thread.
struct PrecisionConfig {
  static constexpr int kDefaultBits = 512;
  static constexpr int kMinBits = 53;

  int mantissa_bits = kDefaultBits;

  /// ceil(mantissa_bits * log10(2)).
  [[nodiscard]] int decimal_digits() const;
  /// Significant digits written by Real::to_string; one more than decimal_digits so that
  /// every value survives a text round trip.
  [[nodiscard]] int serial_digits() const { return decimal_digits() + 1; }

  /// Throws DomainError when mantissa_bits < kMinBits.
  void validate() const;
};

/// Precision currently in force on this thread.
[[nodiscard]] PrecisionConfig current_precision();

/// Sets the thread's precision for its lifetime and restores the previous one on exit.
/// Reals created inside the scope carry its precision; arithmetic between Reals of
/// different precision throws PrecisionMismatch.
class PrecisionScope {
 public:
  explicit PrecisionScope(PrecisionConfig config);
  explicit PrecisionScope(int mantissa_bits) : PrecisionScope(PrecisionConfig{mantissa_bits}) {}
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  PrecisionConfig previous_;
};

/// Radix-2 floating-point number with the precision of the PrecisionScope it was created in.
/// All operations round to nearest and are deterministic for a fixed precision.
class Real {
 public:
  Real();
  Real(int value);   // NOLINT(google-explicit-constructor)
  Real(long value);  // NOLINT(google-explicit-constructor)
  explicit Real(double value);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  /// Parses decimal text ("-1.25", "3e-101", "0.1"). Throws DomainError on anything else.
  static Real from_string(std::string_view text);
  /// p / q, correctly rounded.
  static Real rational(long p, long q);
  static Real pow2(long exponent);
  static Real factorial(int n);

  /// Scientific notation with `digits` significant digits (default: serial_digits()).
  [[nodiscard]] std::string to_string(int digits = 0) const;
  [[nodiscard]] double to_double() const;
  [[nodiscard]] int precision() const { return static_cast<int>(mpfr_get_prec(value_)); }

  [[nodiscard]] bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  [[nodiscard]] bool is_finite() const { return mpfr_number_p(value_) != 0; }
  /// -1, 0 or +1.
  [[nodiscard]] int sign() const { return mpfr_sgn(value_); }
  /// Unit in the last place of this value (2^(e - bits) with 0.5 <= |x| / 2^e < 1).
  [[nodiscard]] Real ulp() const;

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);

  friend Real operator+(Real lhs, const Real& rhs) { return lhs += rhs; }
  friend Real operator-(Real lhs, const Real& rhs) { return lhs -= rhs; }
  friend Real operator*(Real lhs, const Real& rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, const Real& rhs) { return lhs /= rhs; }
  Real operator-() const;

  friend bool operator==(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

  friend std::ostream& operator<<(std::ostream& os, const Real& x);

  [[nodiscard]] mpfr_srcptr get() const { return value_; }
  [[nodiscard]] mpfr_ptr get() { return value_; }

 private:
  mpfr_t value_;
};

[[nodiscard]] Real abs(const Real& x);
[[nodiscard]] Real sqrt(const Real& x);
[[nodiscard]] Real exp(const Real& x);
/// Natural logarithm; DomainError for x <= 0.
[[nodiscard]] Real log(const Real& x);
[[nodiscard]] Real log10(const Real& x);
/// x^n for integer n (x = 0, n < 0 is a DomainError).
[[nodiscard]] Real pow(const Real& x, long n);
/// x^r for x >= 0 and real r.
[[nodiscard]] Real pow(const Real& x, const Real& r);
/// x^(num/den) for x >= 0 computed as the den-th root of x^num with guard bits.
[[nodiscard]] Real pow_rational(const Real& x, long num, long den);
[[nodiscard]] const Real& min(const Real& a, const Real& b);
[[nodiscard]] const Real& max(const Real& a, const Real& b);

/// |t|^(r-1) * t, the odd extension of t -> t^r. Requires r > 0; signed_power(0, r) = 0.
[[nodiscard]] Real signed_power(const Real& t, const Real& r);
/// Integer-exponent variant used in model evaluation: |t|^(n-1) * t.
[[nodiscard]] Real signed_power(const Real& t, int n);
/// log10(|t|); DomainError for t = 0.
[[nodiscard]] Real log10_abs(const Real& t);

/// Machine epsilon 2^(1 - bits) at the current precision.
[[nodiscard]] Real epsilon();

}  // namespace arp
