#include "arp/real.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "arp/errors.hpp"

namespace arp {

namespace {

thread_local PrecisionConfig g_precision{};

mpfr_prec_t ambient_bits() { return static_cast<mpfr_prec_t>(g_precision.mantissa_bits); }

void require_same_precision(const Real& a, const Real& b) {
  if (a.precision() != b.precision()) {
    throw PrecisionMismatch("arithmetic between Reals of " + std::to_string(a.precision()) +
                            " and " + std::to_string(b.precision()) + " bits");
  }
}

// Optional sign, digits with at most one '.', optional exponent. At least one mantissa digit.
bool is_decimal_literal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  bool dot = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      ++digits;
    } else if (s[i] == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (digits == 0) return false;
  if (i == s.size()) return true;
  if (s[i] != 'e' && s[i] != 'E') return false;
  ++i;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t exp_digits = 0;
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) ++exp_digits;
  return exp_digits > 0 && i == s.size();
}

}  // namespace

int PrecisionConfig::decimal_digits() const {
  return static_cast<int>(std::ceil(mantissa_bits * std::log10(2.0)));
}

void PrecisionConfig::validate() const {
  if (mantissa_bits < kMinBits) {
    throw DomainError("mantissa_bits must be at least " + std::to_string(kMinBits) + ", got " +
                      std::to_string(mantissa_bits));
  }
  if (static_cast<long>(mantissa_bits) > static_cast<long>(MPFR_PREC_MAX)) {
    throw DomainError("mantissa_bits exceeds the MPFR limit");
  }
}

PrecisionConfig current_precision() { return g_precision; }

PrecisionScope::PrecisionScope(PrecisionConfig config) : previous_(g_precision) {
  config.validate();
  g_precision = config;
}

PrecisionScope::~PrecisionScope() { g_precision = previous_; }

Real::Real() {
  mpfr_init2(value_, ambient_bits());
  mpfr_set_zero(value_, 1);
}

Real::Real(int value) : Real(static_cast<long>(value)) {}

Real::Real(long value) {
  mpfr_init2(value_, ambient_bits());
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(double value) {
  mpfr_init2(value_, ambient_bits());
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::from_string(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (!is_decimal_literal(text)) {
    throw DomainError("malformed decimal '" + std::string(text) + "'");
  }
  Real result;
  const std::string owned(text);
  mpfr_set_str(result.value_, owned.c_str(), 10, MPFR_RNDN);
  return result;
}

Real Real::rational(long p, long q) {
  if (q == 0) throw DomainError("rational with zero denominator");
  Real result(p);
  mpfr_div_si(result.value_, result.value_, q, MPFR_RNDN);
  return result;
}

Real Real::pow2(long exponent) {
  Real result(1);
  mpfr_mul_2si(result.value_, result.value_, exponent, MPFR_RNDN);
  return result;
}

Real Real::factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative number");
  Real result;
  mpfr_fac_ui(result.value_, static_cast<unsigned long>(n), MPFR_RNDN);
  return result;
}

std::string Real::to_string(int digits) const {
  if (digits <= 0) digits = PrecisionConfig{precision()}.serial_digits();
  char* buffer = nullptr;
  mpfr_asprintf(&buffer, "%.*Re", digits - 1, value_);
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

double Real::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

Real Real::ulp() const {
  if (is_zero()) return pow2(-precision());
  return pow2(static_cast<long>(mpfr_get_exp(value_)) - precision());
}

Real& Real::operator+=(const Real& rhs) {
  require_same_precision(*this, rhs);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  require_same_precision(*this, rhs);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  require_same_precision(*this, rhs);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  require_same_precision(*this, rhs);
  if (rhs.is_zero()) throw DomainError("division by zero");
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real result(*this);
  mpfr_neg(result.value_, result.value_, MPFR_RNDN);
  return result;
}

bool operator==(const Real& a, const Real& b) {
  require_same_precision(a, b);
  return mpfr_equal_p(a.value_, b.value_) != 0;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  require_same_precision(a, b);
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(); }

Real abs(const Real& x) {
  Real r(x);
  mpfr_abs(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  if (x.sign() < 0) throw DomainError("sqrt of a negative number");
  Real r(x);
  mpfr_sqrt(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real exp(const Real& x) {
  Real r(x);
  mpfr_exp(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  if (x.sign() <= 0) throw DomainError("log of a nonpositive number");
  Real r(x);
  mpfr_log(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real log10(const Real& x) {
  if (x.sign() <= 0) throw DomainError("log10 of a nonpositive number");
  Real r(x);
  mpfr_log10(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  if (x.is_zero() && n < 0) throw DomainError("zero to a negative power");
  Real r(x);
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& r) {
  if (x.sign() < 0) throw DomainError("real power of a negative number");
  if (x.precision() != r.precision()) throw PrecisionMismatch("pow operands differ in precision");
  Real out(x);
  mpfr_pow(out.get(), x.get(), r.get(), MPFR_RNDN);
  return out;
}

Real pow_rational(const Real& x, long num, long den) {
  if (den <= 0) throw DomainError("pow_rational needs a positive denominator");
  if (x.sign() < 0) throw DomainError("rational power of a negative number");
  if (x.is_zero()) {
    if (num < 0) throw DomainError("zero to a negative power");
    return num == 0 ? Real(1) : Real(0);
  }
  mpfr_t wide;
  mpfr_init2(wide, mpfr_get_prec(x.get()) + 64);
  mpfr_pow_si(wide, x.get(), num, MPFR_RNDN);
  mpfr_rootn_ui(wide, wide, static_cast<unsigned long>(den), MPFR_RNDN);
  Real out(x);
  mpfr_set(out.get(), wide, MPFR_RNDN);
  mpfr_clear(wide);
  return out;
}

const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }
const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

Real signed_power(const Real& t, const Real& r) {
  if (r.sign() <= 0) throw DomainError("signed_power needs r > 0");
  if (t.is_zero()) return Real(0);
  Real magnitude = pow(abs(t), r);
  return t.sign() < 0 ? -magnitude : magnitude;
}

Real signed_power(const Real& t, int n) {
  if (n <= 0) throw DomainError("signed_power needs n > 0");
  Real magnitude = pow(abs(t), static_cast<long>(n));
  return t.sign() < 0 ? -magnitude : magnitude;
}

Real log10_abs(const Real& t) {
  if (t.is_zero()) throw DomainError("log10_abs of zero");
  return log10(abs(t));
}

Real epsilon() { return Real::pow2(1 - current_precision().mantissa_bits); }

}  // namespace arp
