#pragma once

// Multiprecision scalar kernel. BigReal wraps an MPFR value together with the
// precision context it was created under; arithmetic between different
// contexts throws ContextMismatch. Every result is rounded to nearest.

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "dzeta/errors.hpp"

namespace dzeta {

class PrecisionContext {
 public:
  static constexpr long kMinBits = 64;

  explicit PrecisionContext(long bits);

  /// Smallest context whose decimal capacity is at least `digits`.
  static PrecisionContext from_digits(long digits);

  long bits() const noexcept { return bits_; }
  /// floor(bits * log10 2)
  long decimal_digits() const noexcept;

  PrecisionContext scaled(long factor) const { return PrecisionContext(bits_ * factor); }
  PrecisionContext with_extra_bits(long extra) const { return PrecisionContext(bits_ + extra); }

  friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

 private:
  long bits_;
};

class BigReal {
 public:
  explicit BigReal(const PrecisionContext& ctx);
  BigReal(long value, const PrecisionContext& ctx);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  /// Accepts plain decimal and scientific notation ("1.25", "-3e-40").
  static BigReal parse(std::string_view text, const PrecisionContext& ctx);

  /// Exact rational p/q rounded to the context.
  static BigReal ratio(long p, long q, const PrecisionContext& ctx);

  PrecisionContext context() const { return PrecisionContext(mpfr_get_prec(v_)); }
  BigReal rounded_to(const PrecisionContext& ctx) const;

  /// Scientific notation with `digits` significant digits; 0 prints enough
  /// digits for an exact round trip through parse().
  std::string to_string(std::size_t digits = 0) const;
  double to_double() const;
  /// log10|x| as a double, -inf for zero. Safe far outside double range.
  double log10_abs() const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);
  BigReal& operator*=(long rhs);
  BigReal& operator/=(long rhs);
  BigReal& operator+=(long rhs);
  BigReal& operator-=(long rhs);
  BigReal operator-() const;

  friend BigReal operator+(BigReal a, const BigReal& b) { return a += b; }
  friend BigReal operator-(BigReal a, const BigReal& b) { return a -= b; }
  friend BigReal operator*(BigReal a, const BigReal& b) { return a *= b; }
  friend BigReal operator/(BigReal a, const BigReal& b) { return a /= b; }
  friend BigReal operator+(BigReal a, long b) { return a += b; }
  friend BigReal operator-(BigReal a, long b) { return a -= b; }
  friend BigReal operator*(BigReal a, long b) { return a *= b; }
  friend BigReal operator/(BigReal a, long b) { return a /= b; }

  // Comparisons are value comparisons and work across contexts.
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
  friend bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, long b);

  /// Direct access for kernels that need fused in-place MPFR calls.
  mpfr_ptr raw() noexcept { return v_; }
  mpfr_srcptr raw() const noexcept { return v_; }

  /// Throws NumericalError unless the stored value is finite.
  void check_finite(const char* where) const;

 private:
  void require_same_context(const BigReal& other) const;
  mpfr_t v_;
};

std::ostream& operator<<(std::ostream& os, const BigReal& x);

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log10(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
void sin_cos(const BigReal& x, BigReal& sine, BigReal& cosine);

BigReal pi(const PrecisionContext& ctx);
/// 10^k rounded to the context.
BigReal pow10(long k, const PrecisionContext& ctx);

/// ln n for integer n >= 1, memoized per (n, context). Safe to call from
/// multiple threads; the returned reference stays valid for the process.
const BigReal& log_int(unsigned long n, const PrecisionContext& ctx);

class BigComplex {
 public:
  explicit BigComplex(const PrecisionContext& ctx) : re(ctx), im(ctx) {}
  BigComplex(BigReal real, BigReal imag);
  static BigComplex parse(std::string_view re, std::string_view im, const PrecisionContext& ctx);

  PrecisionContext context() const { return re.context(); }
  BigComplex rounded_to(const PrecisionContext& ctx) const;

  BigComplex& operator+=(const BigComplex& rhs);
  BigComplex& operator-=(const BigComplex& rhs);
  BigComplex& operator*=(const BigComplex& rhs);
  BigComplex& operator/=(const BigComplex& rhs);
  BigComplex& operator*=(const BigReal& rhs);
  BigComplex operator-() const { return BigComplex(-re, -im); }

  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }
  friend BigComplex operator*(BigComplex a, const BigReal& b) { return a *= b; }

  friend bool operator==(const BigComplex& a, const BigComplex& b) { return a.re == b.re && a.im == b.im; }

  BigReal re;
  BigReal im;
};

std::ostream& operator<<(std::ostream& os, const BigComplex& z);

BigComplex conj(const BigComplex& z);
BigReal abs(const BigComplex& z);
BigComplex exp(const BigComplex& z);

/// n^{-s} = exp(-s ln n), rounded to `ctx`. Internally evaluated with guard
/// bits so the result is within a few ulps.
BigComplex pow_int_neg_s(unsigned long n, const BigComplex& s, const PrecisionContext& ctx);

/// Number of leading decimal digits on which a and b agree:
/// floor(-log10(|a-b| / max(|a|,|b|))) clamped to [0, capacity], where
/// capacity is the decimal capacity of the coarser context. Equal values
/// return the capacity; a sign mismatch returns 0.
long agreement_digits(const BigReal& a, const BigReal& b);

}  // namespace dzeta
