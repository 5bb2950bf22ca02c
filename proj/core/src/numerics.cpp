#include "dzeta/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <utility>

namespace dzeta {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;
constexpr double kLog10Of2 = 0.30102999566398119521;
// Guard bits for primitives that chain several correctly rounded steps.
constexpr long kGuardBits = 32;

}  // namespace

// ---------------------------------------------------------------------------
// PrecisionContext

PrecisionContext::PrecisionContext(long bits) : bits_(bits) {
  if (bits < kMinBits) {
    throw InputError("precision must be at least " + std::to_string(kMinBits) + " bits, got " +
                     std::to_string(bits));
  }
  if (bits > MPFR_PREC_MAX) throw InputError("precision exceeds MPFR_PREC_MAX");
}

PrecisionContext PrecisionContext::from_digits(long digits) {
  long bits = static_cast<long>(std::ceil(static_cast<double>(digits) / kLog10Of2));
  bits = std::max(bits, kMinBits);
  PrecisionContext ctx(bits);
  while (ctx.decimal_digits() < digits) ctx = PrecisionContext(ctx.bits() + 1);
  return ctx;
}

long PrecisionContext::decimal_digits() const noexcept {
  // bits * log10 2 is never an integer, and long double resolves it for any
  // precision MPFR can allocate.
  return static_cast<long>((static_cast<long double>(bits_) * 0.301029995663981195213738894724493L));
}

// ---------------------------------------------------------------------------
// BigReal

BigReal::BigReal(const PrecisionContext& ctx) {
  mpfr_init2(v_, ctx.bits());
  mpfr_set_zero(v_, 1);
}

BigReal::BigReal(long value, const PrecisionContext& ctx) {
  mpfr_init2(v_, ctx.bits());
  mpfr_set_si(v_, value, kRnd);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, kRnd);
}

BigReal::BigReal(BigReal&& other) noexcept {
  // Steal the limbs and leave `other` as a valid zero of the same precision.
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, kRnd);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) mpfr_swap(v_, other.v_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal BigReal::parse(std::string_view text, const PrecisionContext& ctx) {
  auto first = text.find_first_not_of(" \t\r\n");
  auto last = text.find_last_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw InputError("empty number");
  std::string s(text.substr(first, last - first + 1));
  for (char c : s) {
    bool ok = (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E';
    if (!ok) throw InputError("invalid character in number '" + s + "'");
  }
  BigReal r(ctx);
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 10, kRnd);
  if (end == s.c_str() || *end != '\0' || !mpfr_number_p(r.v_)) {
    throw InputError("cannot parse number '" + s + "'");
  }
  return r;
}

BigReal BigReal::ratio(long p, long q, const PrecisionContext& ctx) {
  if (q == 0) throw NumericalError("ratio with zero denominator");
  BigReal r(ctx);
  mpq_t rat;
  mpq_init(rat);
  mpq_set_si(rat, p, 1);
  mpz_t den;
  mpz_init_set_si(den, q);
  mpq_set_den(rat, den);
  mpq_canonicalize(rat);
  mpfr_set_q(r.v_, rat, kRnd);
  mpz_clear(den);
  mpq_clear(rat);
  return r;
}

BigReal BigReal::rounded_to(const PrecisionContext& ctx) const {
  BigReal r(ctx);
  mpfr_set(r.v_, v_, kRnd);
  return r;
}

std::string BigReal::to_string(std::size_t digits) const {
  if (mpfr_zero_p(v_)) return "0";
  mpfr_exp_t e = 0;
  char* raw_digits = mpfr_get_str(nullptr, &e, 10, digits, v_, kRnd);
  std::string d(raw_digits);
  mpfr_free_str(raw_digits);
  std::string out;
  std::size_t pos = 0;
  if (d[0] == '-') {
    out.push_back('-');
    pos = 1;
  }
  out.push_back(d[pos]);
  if (d.size() > pos + 1) {
    out.push_back('.');
    out.append(d, pos + 1, std::string::npos);
  }
  long exp10 = static_cast<long>(e) - 1;
  out.push_back('e');
  out.push_back(exp10 < 0 ? '-' : '+');
  out += std::to_string(exp10 < 0 ? -exp10 : exp10);
  return out;
}

double BigReal::to_double() const { return mpfr_get_d(v_, kRnd); }

double BigReal::log10_abs() const {
  if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_abs(t, v_, kRnd);
  mpfr_log10(t, t, kRnd);
  double r = mpfr_get_d(t, kRnd);
  mpfr_clear(t);
  return r;
}

void BigReal::check_finite(const char* where) const {
  if (!mpfr_number_p(v_)) throw NumericalError(std::string("non-finite value in ") + where);
}

void BigReal::require_same_context(const BigReal& other) const {
  if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) {
    throw ContextMismatch("arithmetic between " + std::to_string(mpfr_get_prec(v_)) + "-bit and " +
                          std::to_string(mpfr_get_prec(other.v_)) + "-bit values");
  }
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  require_same_context(rhs);
  mpfr_add(v_, v_, rhs.v_, kRnd);
  check_finite("addition");
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  require_same_context(rhs);
  mpfr_sub(v_, v_, rhs.v_, kRnd);
  check_finite("subtraction");
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  require_same_context(rhs);
  mpfr_mul(v_, v_, rhs.v_, kRnd);
  check_finite("multiplication");
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  require_same_context(rhs);
  if (mpfr_zero_p(rhs.v_)) throw NumericalError("division by zero");
  mpfr_div(v_, v_, rhs.v_, kRnd);
  check_finite("division");
  return *this;
}

BigReal& BigReal::operator*=(long rhs) {
  mpfr_mul_si(v_, v_, rhs, kRnd);
  return *this;
}

BigReal& BigReal::operator/=(long rhs) {
  if (rhs == 0) throw NumericalError("division by zero");
  mpfr_div_si(v_, v_, rhs, kRnd);
  return *this;
}

BigReal& BigReal::operator+=(long rhs) {
  mpfr_add_si(v_, v_, rhs, kRnd);
  return *this;
}

BigReal& BigReal::operator-=(long rhs) {
  mpfr_sub_si(v_, v_, rhs, kRnd);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal r(*this);
  mpfr_neg(r.v_, r.v_, kRnd);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const BigReal& a, long b) {
  int c = mpfr_cmp_si(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::ostream& operator<<(std::ostream& os, const BigReal& x) { return os << x.to_string(); }

// ---------------------------------------------------------------------------
// Elementary functions

#define DZETA_UNARY(name, call)                  \
  BigReal name(const BigReal& x) {               \
    BigReal r(x.context());                      \
    call(r.raw(), x.raw(), MPFR_RNDN);           \
    r.check_finite(#name);                       \
    return r;                                    \
  }

DZETA_UNARY(abs, mpfr_abs)
DZETA_UNARY(exp, mpfr_exp)
DZETA_UNARY(sin, mpfr_sin)
DZETA_UNARY(cos, mpfr_cos)

#undef DZETA_UNARY

BigReal sqrt(const BigReal& x) {
  if (x.sign() < 0) throw NumericalError("sqrt of negative value");
  BigReal r(x.context());
  mpfr_sqrt(r.raw(), x.raw(), kRnd);
  return r;
}

BigReal log(const BigReal& x) {
  if (x.sign() <= 0) throw NumericalError("log of non-positive value");
  BigReal r(x.context());
  mpfr_log(r.raw(), x.raw(), kRnd);
  return r;
}

BigReal log10(const BigReal& x) {
  if (x.sign() <= 0) throw NumericalError("log10 of non-positive value");
  BigReal r(x.context());
  mpfr_log10(r.raw(), x.raw(), kRnd);
  return r;
}

BigReal atan2(const BigReal& y, const BigReal& x) {
  if (y.context() != x.context()) throw ContextMismatch("atan2 across contexts");
  BigReal r(x.context());
  mpfr_atan2(r.raw(), y.raw(), x.raw(), kRnd);
  return r;
}

void sin_cos(const BigReal& x, BigReal& sine, BigReal& cosine) {
  mpfr_sin_cos(sine.raw(), cosine.raw(), x.raw(), kRnd);
}

BigReal pi(const PrecisionContext& ctx) {
  BigReal r(ctx);
  mpfr_const_pi(r.raw(), kRnd);
  return r;
}

BigReal pow10(long k, const PrecisionContext& ctx) {
  BigReal r(10, ctx);
  mpfr_pow_si(r.raw(), r.raw(), k, kRnd);
  return r;
}

const BigReal& log_int(unsigned long n, const PrecisionContext& ctx) {
  if (n == 0) throw NumericalError("log of zero");
  static std::shared_mutex mutex;
  static std::map<std::pair<long, unsigned long>, std::unique_ptr<BigReal>> memo;
  const auto key = std::make_pair(ctx.bits(), n);
  {
    std::shared_lock lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return *it->second;
  }
  auto value = std::make_unique<BigReal>(ctx);
  mpfr_set_ui(value->raw(), n, kRnd);
  mpfr_log(value->raw(), value->raw(), kRnd);
  std::unique_lock lock(mutex);
  // A concurrent writer may have won; its value is bit-identical.
  auto [it, inserted] = memo.try_emplace(key, std::move(value));
  return *it->second;
}

// ---------------------------------------------------------------------------
// BigComplex

BigComplex::BigComplex(BigReal real, BigReal imag) : re(std::move(real)), im(std::move(imag)) {
  if (re.context() != im.context()) throw ContextMismatch("complex parts in different contexts");
}

BigComplex BigComplex::parse(std::string_view r, std::string_view i, const PrecisionContext& ctx) {
  return BigComplex(BigReal::parse(r, ctx), BigReal::parse(i, ctx));
}

BigComplex BigComplex::rounded_to(const PrecisionContext& ctx) const {
  return BigComplex(re.rounded_to(ctx), im.rounded_to(ctx));
}

BigComplex& BigComplex::operator+=(const BigComplex& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& rhs) {
  if (context() != rhs.context()) throw ContextMismatch("complex multiply across contexts");
  BigReal real(context());
  BigReal imag(context());
  // (a+bi)(c+di); mpfr_fmms keeps each part to a single rounding.
  mpfr_fmms(real.raw(), re.raw(), rhs.re.raw(), im.raw(), rhs.im.raw(), kRnd);
  mpfr_fmma(imag.raw(), re.raw(), rhs.im.raw(), im.raw(), rhs.re.raw(), kRnd);
  re = std::move(real);
  im = std::move(imag);
  re.check_finite("complex multiplication");
  im.check_finite("complex multiplication");
  return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& rhs) {
  if (context() != rhs.context()) throw ContextMismatch("complex divide across contexts");
  if (rhs.re.is_zero() && rhs.im.is_zero()) throw NumericalError("complex division by zero");
  const PrecisionContext work = context().with_extra_bits(kGuardBits);
  BigReal a = re.rounded_to(work), b = im.rounded_to(work);
  BigReal c = rhs.re.rounded_to(work), d = rhs.im.rounded_to(work);
  BigReal den(work), real(work), imag(work);
  mpfr_fmma(den.raw(), c.raw(), c.raw(), d.raw(), d.raw(), kRnd);
  mpfr_fmma(real.raw(), a.raw(), c.raw(), b.raw(), d.raw(), kRnd);
  mpfr_fmms(imag.raw(), b.raw(), c.raw(), a.raw(), d.raw(), kRnd);
  real /= den;
  imag /= den;
  re = real.rounded_to(context());
  im = imag.rounded_to(context());
  return *this;
}

BigComplex& BigComplex::operator*=(const BigReal& rhs) {
  re *= rhs;
  im *= rhs;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const BigComplex& z) {
  return os << z.re.to_string() << (z.im.sign() < 0 ? " - " : " + ") << abs(z.im).to_string() << "i";
}

BigComplex conj(const BigComplex& z) { return BigComplex(z.re, -z.im); }

BigReal abs(const BigComplex& z) {
  BigReal r(z.context());
  mpfr_hypot(r.raw(), z.re.raw(), z.im.raw(), kRnd);
  return r;
}

BigComplex exp(const BigComplex& z) {
  const PrecisionContext ctx = z.context();
  const PrecisionContext work = ctx.with_extra_bits(kGuardBits);
  BigReal mag(work), s(work), c(work);
  mpfr_exp(mag.raw(), z.re.raw(), kRnd);
  mpfr_sin_cos(s.raw(), c.raw(), z.im.raw(), kRnd);
  c *= mag;
  s *= mag;
  return BigComplex(c.rounded_to(ctx), s.rounded_to(ctx));
}

BigComplex pow_int_neg_s(unsigned long n, const BigComplex& s, const PrecisionContext& ctx) {
  if (n == 0) throw InputError("pow_int_neg_s requires n >= 1");
  if (n == 1) return BigComplex(BigReal(1, ctx), BigReal(0, ctx));
  // The phase t*ln n loses its integer bits to range reduction; the extra
  // guard covers |t ln n| < 2^32.
  const PrecisionContext work = ctx.with_extra_bits(2 * kGuardBits);
  const BigReal& ln_n = log_int(n, work);
  BigReal mag(work), phase(work), sn(work), cs(work);
  mpfr_mul(mag.raw(), s.re.raw(), ln_n.raw(), kRnd);
  mpfr_neg(mag.raw(), mag.raw(), kRnd);
  mpfr_exp(mag.raw(), mag.raw(), kRnd);
  mpfr_mul(phase.raw(), s.im.raw(), ln_n.raw(), kRnd);
  mpfr_sin_cos(sn.raw(), cs.raw(), phase.raw(), kRnd);
  mpfr_mul(cs.raw(), cs.raw(), mag.raw(), kRnd);
  mpfr_mul(sn.raw(), sn.raw(), mag.raw(), kRnd);
  mpfr_neg(sn.raw(), sn.raw(), kRnd);
  BigComplex out(cs.rounded_to(ctx), sn.rounded_to(ctx));
  out.re.check_finite("pow_int_neg_s");
  out.im.check_finite("pow_int_neg_s");
  return out;
}

long agreement_digits(const BigReal& a, const BigReal& b) {
  const long capacity = std::min(a.context().decimal_digits(), b.context().decimal_digits());
  if (a == b) return capacity;
  if (a.sign() != b.sign()) return 0;
  const PrecisionContext work(std::max(a.context().bits(), b.context().bits()));
  BigReal diff(work), scale(work);
  mpfr_sub(diff.raw(), a.raw(), b.raw(), kRnd);
  mpfr_abs(diff.raw(), diff.raw(), kRnd);
  if (mpfr_cmpabs(a.raw(), b.raw()) >= 0) {
    mpfr_abs(scale.raw(), a.raw(), kRnd);
  } else {
    mpfr_abs(scale.raw(), b.raw(), kRnd);
  }
  mpfr_div(diff.raw(), diff.raw(), scale.raw(), kRnd);
  const double digits = std::floor(-diff.log10_abs());
  if (digits <= 0) return 0;
  return std::min(capacity, static_cast<long>(digits));
}

}  // namespace dzeta
