#pragma once

// Value-semantic wrapper around an MPFR floating-point number.
//
// Every Real carries its own precision. Binary operations produce a result at
// the larger of the two operand precisions; mixing with a double or integer
// keeps the Real operand's precision. There is no process-wide default
// precision, so kernels running at different precisions never interfere.

#include <mpfr.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace tw::mp {

inline constexpr mpfr_prec_t kMinPrecision = 53;

class Real {
 public:
  Real() : Real(kMinPrecision) {}

  explicit Real(mpfr_prec_t bits) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_zero(v_, 1);
  }
  Real(double value, mpfr_prec_t bits) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_d(v_, value, MPFR_RNDN);
  }
  Real(long value, mpfr_prec_t bits) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_si(v_, value, MPFR_RNDN);
  }
  Real(int value, mpfr_prec_t bits) : Real(static_cast<long>(value), bits) {}
  // Exact rational num/den rounded once.
  Real(long num, long den, mpfr_prec_t bits) : Real(num, bits) {
    mpfr_div_si(v_, v_, den, MPFR_RNDN);
  }

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Real(Real&& other) noexcept {
    mpfr_init2(v_, kMinPrecision);
    mpfr_swap(v_, other.v_);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  // Parses decimal or "0x...p..." hexadecimal text; throws std::invalid_argument.
  static Real parse(std::string_view text, mpfr_prec_t bits);

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  Real at_precision(mpfr_prec_t bits) const {
    Real r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long_floor() const { return mpfr_get_si(v_, MPFR_RNDD); }
  // Decimal scientific notation with `digits` significant digits.
  std::string to_string(int digits = 20) const;
  // Exact hexadecimal representation; parse() reads it back bit-identically.
  std::string to_hex() const;

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // Binary exponent e with value = m * 2^e, 0.5 <= |m| < 1.
  long exponent() const { return is_zero() ? 0 : static_cast<long>(mpfr_get_exp(v_)); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& b) { widen(b); mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& b) { widen(b); mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& b) { widen(b); mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& b) { widen(b); mpfr_div(v_, v_, b.v_, MPFR_RNDN); return *this; }
  Real& operator+=(double b) { mpfr_add_d(v_, v_, b, MPFR_RNDN); return *this; }
  Real& operator-=(double b) { mpfr_sub_d(v_, v_, b, MPFR_RNDN); return *this; }
  Real& operator*=(double b) { mpfr_mul_d(v_, v_, b, MPFR_RNDN); return *this; }
  Real& operator/=(double b) { mpfr_div_d(v_, v_, b, MPFR_RNDN); return *this; }
  Real& operator*=(long b) { mpfr_mul_si(v_, v_, b, MPFR_RNDN); return *this; }
  Real& operator/=(long b) { mpfr_div_si(v_, v_, b, MPFR_RNDN); return *this; }
  Real& operator*=(int b) { return *this *= static_cast<long>(b); }
  Real& operator/=(int b) { return *this /= static_cast<long>(b); }

 private:
  static mpfr_prec_t clamp(mpfr_prec_t bits) { return bits < kMinPrecision ? kMinPrecision : bits; }
  void widen(const Real& b) {
    if (mpfr_get_prec(b.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(b.v_), MPFR_RNDN);
  }

  mpfr_t v_;
};

namespace detail {
inline mpfr_prec_t wider(const Real& a, const Real& b) {
  return a.precision() > b.precision() ? a.precision() : b.precision();
}
}  // namespace detail

#define TW_REAL_BINOP(op, fn)                                               \
  inline Real operator op(const Real& a, const Real& b) {                   \
    Real r(detail::wider(a, b));                                            \
    fn(r.get(), a.get(), b.get(), MPFR_RNDN);                               \
    return r;                                                               \
  }                                                                         \
  inline Real operator op(Real&& a, const Real& b) {                        \
    a op## = b;                                                             \
    return std::move(a);                                                    \
  }
TW_REAL_BINOP(+, mpfr_add)
TW_REAL_BINOP(-, mpfr_sub)
TW_REAL_BINOP(*, mpfr_mul)
TW_REAL_BINOP(/, mpfr_div)
#undef TW_REAL_BINOP

inline Real operator+(Real a, double b) { return a += b; }
inline Real operator-(Real a, double b) { return a -= b; }
inline Real operator*(Real a, double b) { return a *= b; }
inline Real operator/(Real a, double b) { return a /= b; }
inline Real operator+(double a, Real b) { return b += a; }
inline Real operator*(double a, Real b) { return b *= a; }
inline Real operator-(double a, const Real& b) {
  Real r(b.precision());
  mpfr_d_sub(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}
inline Real operator/(double a, const Real& b) {
  Real r(b.precision());
  mpfr_d_div(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}
inline Real operator*(Real a, long b) { return a *= b; }
inline Real operator/(Real a, long b) { return a /= b; }
inline Real operator*(long a, Real b) { return b *= a; }
inline Real operator*(Real a, int b) { return a *= b; }
inline Real operator/(Real a, int b) { return a /= b; }
inline Real operator*(int a, Real b) { return b *= a; }

inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
inline bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
inline bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) < 0; }
inline bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) > 0; }
inline bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) <= 0; }
inline bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) >= 0; }
inline bool operator==(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) == 0; }

#define TW_REAL_UNARY(name, fn)                 \
  inline Real name(const Real& a) {             \
    Real r(a.precision());                      \
    fn(r.get(), a.get(), MPFR_RNDN);            \
    return r;                                   \
  }
TW_REAL_UNARY(abs, mpfr_abs)
TW_REAL_UNARY(sqrt, mpfr_sqrt)
TW_REAL_UNARY(cbrt, mpfr_cbrt)
TW_REAL_UNARY(exp, mpfr_exp)
TW_REAL_UNARY(expm1, mpfr_expm1)
TW_REAL_UNARY(log, mpfr_log)
TW_REAL_UNARY(log1p, mpfr_log1p)
TW_REAL_UNARY(sin, mpfr_sin)
TW_REAL_UNARY(cos, mpfr_cos)
TW_REAL_UNARY(atan, mpfr_atan)
#undef TW_REAL_UNARY

inline Real floor(const Real& a) {
  Real r(a.precision());
  mpfr_floor(r.get(), a.get());
  return r;
}
inline Real pow(const Real& a, const Real& b) {
  Real r(detail::wider(a, b));
  mpfr_pow(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real& a, long n) {
  Real r(a.precision());
  mpfr_pow_si(r.get(), a.get(), n, MPFR_RNDN);
  return r;
}
inline Real pow(const Real& a, int n) { return pow(a, static_cast<long>(n)); }
// a^(num/den) with the exponent formed at the operand's precision.
inline Real pow_rational(const Real& a, long num, long den) {
  return pow(a, Real(num, den, a.precision()));
}

inline Real pi(mpfr_prec_t bits) {
  Real r(bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}
inline Real ln2(mpfr_prec_t bits) {
  Real r(bits);
  mpfr_const_log2(r.get(), MPFR_RNDN);
  return r;
}
inline Real euler_gamma(mpfr_prec_t bits) {
  Real r(bits);
  mpfr_const_euler(r.get(), MPFR_RNDN);
  return r;
}
// Riemann zeta at a positive integer argument s >= 2.
inline Real zeta_ui(unsigned long s, mpfr_prec_t bits) {
  Real r(bits);
  mpfr_zeta_ui(r.get(), s, MPFR_RNDN);
  return r;
}

inline std::ostream& operator<<(std::ostream& os, const Real& r) { return os << r.to_string(25); }

}  // namespace tw::mp

namespace tw {
using mp::Real;

// Lets templated kernels run on double or Real with the same source.
template <class T>
struct Scalar;

template <>
struct Scalar<double> {
  static double make(double v, long /*bits*/) { return v; }
  static double make(long num, long den, long /*bits*/) { return static_cast<double>(num) / den; }
  static long bits(double /*v*/) { return 53; }
  static double to_double(double v) { return v; }
};

template <>
struct Scalar<Real> {
  static Real make(double v, long bits) { return Real(v, bits); }
  static Real make(long num, long den, long bits) { return Real(num, den, bits); }
  static long bits(const Real& v) { return v.precision(); }
  static double to_double(const Real& v) { return v.to_double(); }
};
}  // namespace tw
