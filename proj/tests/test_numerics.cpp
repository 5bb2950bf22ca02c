#include <gtest/gtest.h>
#include <mpfr.h>

#include "dzeta/errors.hpp"
#include "dzeta/numerics.hpp"

using namespace dzeta;

namespace {

// exp(-s ln n) assembled from raw MPFR calls at `bits`, independent of BigComplex.
std::pair<BigReal, BigReal> pow_oracle(unsigned long n, const char* sre, const char* sim, long bits) {
  const PrecisionContext c(bits);
  BigReal ln(c), mag(c), ang(c), re(c), im(c), sr(c), si(c);
  mpfr_set_str(sr.raw(), sre, 10, MPFR_RNDN);
  mpfr_set_str(si.raw(), sim, 10, MPFR_RNDN);
  mpfr_set_ui(ln.raw(), n, MPFR_RNDN);
  mpfr_log(ln.raw(), ln.raw(), MPFR_RNDN);
  mpfr_mul(mag.raw(), sr.raw(), ln.raw(), MPFR_RNDN);
  mpfr_neg(mag.raw(), mag.raw(), MPFR_RNDN);
  mpfr_exp(mag.raw(), mag.raw(), MPFR_RNDN);
  mpfr_mul(ang.raw(), si.raw(), ln.raw(), MPFR_RNDN);
  mpfr_cos(re.raw(), ang.raw(), MPFR_RNDN);
  mpfr_sin(im.raw(), ang.raw(), MPFR_RNDN);
  mpfr_mul(re.raw(), re.raw(), mag.raw(), MPFR_RNDN);
  mpfr_mul(im.raw(), im.raw(), mag.raw(), MPFR_RNDN);
  mpfr_neg(im.raw(), im.raw(), MPFR_RNDN);
  return {re, im};
}

}  // namespace

TEST(PrecisionContext, DecimalCapacity) {
  EXPECT_EQ(PrecisionContext(100).decimal_digits(), 30);
  EXPECT_EQ(PrecisionContext(3322).decimal_digits(), 1000);
  EXPECT_GE(PrecisionContext::from_digits(150).decimal_digits(), 150);
  EXPECT_EQ(PrecisionContext(200).scaled(2).bits(), 400);
}

TEST(BigReal, MixedContextsRejected) {
  BigReal a(1, PrecisionContext(100)), b(1, PrecisionContext(200));
  EXPECT_THROW(a += b, ContextMismatch);
  EXPECT_THROW((void)(a * b), ContextMismatch);
  EXPECT_NO_THROW(a += b.rounded_to(PrecisionContext(100)));
}

TEST(BigReal, ParsePrintRoundTrip) {
  const auto ctx = PrecisionContext::from_digits(60);
  const char* texts[] = {"14.134725141734693790457251983562470270784257115699", "-2.5e-40", "1e300", "0.1",
                         "-7"};
  for (const char* t : texts) {
    const BigReal x = BigReal::parse(t, ctx);
    EXPECT_TRUE(BigReal::parse(x.to_string(), ctx) == x) << t;
  }
  EXPECT_THROW(BigReal::parse("12a", ctx), InputError);
  EXPECT_THROW(BigReal::parse("", ctx), InputError);
  EXPECT_EQ(BigReal::parse("0.25", ctx).to_string(3), "2.50e-1");
}

TEST(AgreementDigits, Examples) {
  const PrecisionContext c100(100);
  EXPECT_EQ(agreement_digits(BigReal::parse("1.0000", c100), BigReal::parse("1.0000", c100)), 30);
  EXPECT_EQ(agreement_digits(BigReal(1, c100), BigReal(-1, c100)), 0);
  // |a-b|/max = 3.2e-5/1.234599 = 2.59e-5, floor(4.59) = 4
  const auto ctx = PrecisionContext::from_digits(40);
  EXPECT_EQ(agreement_digits(BigReal::parse("1.234567", ctx), BigReal::parse("1.234599", ctx)), 4);
  // equal values in different contexts: the coarser capacity
  EXPECT_EQ(agreement_digits(BigReal(3, c100), BigReal(3, PrecisionContext(400))), 30);
}

TEST(PowIntNegS, TrivialValues) {
  const auto ctx = PrecisionContext::from_digits(50);
  const BigComplex s = BigComplex::parse("0.3", "-17.25", ctx);
  const BigComplex one = pow_int_neg_s(1, s, ctx);
  EXPECT_TRUE(one.re == 1 && one.im.is_zero());
  const BigComplex half = pow_int_neg_s(2, BigComplex::parse("1", "0", ctx), ctx);
  EXPECT_TRUE(half.re == BigReal::ratio(1, 2, ctx));
  EXPECT_TRUE(half.im.is_zero());
}

TEST(PowIntNegS, MatchesDoubledPrecisionOracle) {
  for (long digits : {50L, 200L}) {
    const auto ctx = PrecisionContext::from_digits(digits);
    const BigComplex s = BigComplex::parse("0.5", "14.1347251417", ctx);
    for (unsigned long n : {2UL, 3UL, 97UL, 1000UL}) {
      const BigComplex v = pow_int_neg_s(n, s, ctx);
      const auto [ore, oim] = pow_oracle(n, "0.5", "14.1347251417", 2 * ctx.bits());
      const BigReal err = abs(BigComplex(v.re.rounded_to(ore.context()) - ore, v.im.rounded_to(oim.context()) - oim));
      const BigReal scale = abs(BigComplex(ore, oim));
      EXPECT_LT(err / scale, pow10(-(ctx.decimal_digits() - 3), ore.context())) << "n=" << n;
    }
  }
}

TEST(PowIntNegS, ConjugateAndMultiplicative) {
  const auto ctx = PrecisionContext::from_digits(80);
  const BigComplex s = BigComplex::parse("0.5", "21.0220396387", ctx);
  const BigReal tol = pow10(-(ctx.decimal_digits() - 4), ctx);
  const BigComplex a = pow_int_neg_s(6, s, ctx);
  const BigComplex b = pow_int_neg_s(6, conj(s), ctx);
  EXPECT_LT(abs(a - conj(b)), tol);
  const BigComplex prod = pow_int_neg_s(2, s, ctx) * pow_int_neg_s(3, s, ctx);
  EXPECT_LT(abs(prod - a), tol);
}

TEST(BigComplex, DivisionInvertsMultiplication) {
  const auto ctx = PrecisionContext::from_digits(60);
  const BigComplex a = BigComplex::parse("1.25", "-3.5", ctx);
  const BigComplex b = BigComplex::parse("-0.75", "2", ctx);
  EXPECT_LT(abs((a * b) / b - a), pow10(-55, ctx));
}

TEST(LogInt, MemoizedReferenceIsStable) {
  const auto ctx = PrecisionContext::from_digits(40);
  const BigReal& a = log_int(12345, ctx);
  const BigReal& b = log_int(12345, ctx);
  EXPECT_EQ(&a, &b);
  EXPECT_LT(abs(a - log(BigReal(12345, ctx))), pow10(-39, ctx));
}
