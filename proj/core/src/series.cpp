#include "dzeta/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dzeta {

namespace {

struct ValueAndDerivative {
  BigComplex value;
  BigComplex derivative;
};

ValueAndDerivative evaluate_both(const FiniteDirichletSeries& f, const BigComplex& s_in,
                                 bool want_derivative) {
  const PrecisionContext ctx = f.context();
  const BigComplex s = s_in.rounded_to(ctx);
  BigComplex value(ctx), derivative(ctx);
  for (std::size_t n = 1; n <= f.size(); ++n) {
    const BigComplex term = pow_int_neg_s(n, s, ctx) * f[n];
    value += term;
    if (want_derivative && n > 1) derivative -= term * log_int(n, ctx);
  }
  return {std::move(value), std::move(derivative)};
}

}  // namespace

PrecisionContext FiniteDirichletSeries::context() const {
  if (coeffs.empty()) throw InputError("empty Dirichlet series has no context");
  return coeffs.front().context();
}

FiniteDirichletSeries FiniteDirichletSeries::ones(std::size_t n, const PrecisionContext& ctx) {
  FiniteDirichletSeries f;
  f.coeffs.assign(n, BigReal(1, ctx));
  return f;
}

FiniteDirichletSeries FiniteDirichletSeries::alternating(std::size_t n, const PrecisionContext& ctx) {
  FiniteDirichletSeries f;
  f.coeffs.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) f.coeffs.emplace_back(k % 2 == 1 ? 1 : -1, ctx);
  return f;
}

BigComplex evaluate(const FiniteDirichletSeries& f, const BigComplex& s) {
  return evaluate_both(f, s, false).value;
}

BigComplex evaluate_derivative(const FiniteDirichletSeries& f, const BigComplex& s) {
  return evaluate_both(f, s, true).derivative;
}

// ---------------------------------------------------------------------------
// Alternating zeta via Chebyshev-weighted acceleration (Cohen, Rodriguez
// Villegas, Zagier algorithm 1). The truncation error is bounded by
// 3 (1 + 2|t|) e^{pi |t| / 2} / (3 + sqrt 8)^n.

std::size_t eta_term_count(const BigComplex& s, long digits) {
  const double t = std::fabs(s.im.to_double());
  const double sigma = s.re.to_double();
  const double rate = std::log10(3.0 + std::sqrt(8.0));
  const double growth = std::log10(3.0 * (1.0 + 2.0 * t)) + t * std::numbers::pi / (2.0 * std::log(10.0));
  double n = (static_cast<double>(digits) + 5.0 + growth) / rate;
  if (sigma < 0) {
    // Terms grow like k^{-sigma}; fold that into the bound.
    for (int i = 0; i < 4; ++i) {
      n = (static_cast<double>(digits) + 5.0 + growth + (-sigma) * std::log10(std::max(n, 2.0))) / rate;
    }
  }
  return std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(n)) + 2);
}

EtaWithDerivative eta_with_derivative(const BigComplex& s_in, const PrecisionContext& ctx,
                                      const EtaOptions& opts) {
  const double height = std::fabs(s_in.im.to_double());
  if (height > opts.max_height) {
    throw InputError("eta: |Im s| = " + std::to_string(height) + " exceeds the acceleration budget " +
                     std::to_string(opts.max_height));
  }
  const std::size_t n = eta_term_count(s_in, ctx.decimal_digits());
  const double sigma = s_in.re.to_double();
  long guard = 32 + static_cast<long>(std::log2(static_cast<double>(n)));
  if (sigma < 0) guard += static_cast<long>(std::ceil(-sigma * std::log2(static_cast<double>(n))));
  const PrecisionContext work = ctx.with_extra_bits(guard);
  const BigComplex s = s_in.rounded_to(work);

  BigReal d = BigReal(3, work) + sqrt(BigReal(8, work));
  mpfr_pow_ui(d.raw(), d.raw(), n, MPFR_RNDN);
  {
    BigReal inv = BigReal(1, work) / d;
    d += inv;
    d /= 2;
  }
  BigReal b(-1, work);
  BigReal c = -d;
  BigComplex value(work), derivative(work);
  const long nn = static_cast<long>(n);
  for (long k = 0; k < nn; ++k) {
    c = b - c;
    const unsigned long m = static_cast<unsigned long>(k + 1);
    BigComplex term = pow_int_neg_s(m, s, work) * c;
    if (m > 1) derivative -= term * log_int(m, work);
    value += term;
    b *= 2 * (k + nn) * (k - nn);
    b /= (2 * k + 1) * (k + 1);
  }
  value.re /= d;
  value.im /= d;
  derivative.re /= d;
  derivative.im /= d;
  return {value.rounded_to(ctx), derivative.rounded_to(ctx)};
}

BigComplex eta(const BigComplex& s, const PrecisionContext& ctx, const EtaOptions& opts) {
  return eta_with_derivative(s, ctx, opts).value;
}

BigComplex zeta(const BigComplex& s, const PrecisionContext& ctx, const EtaOptions& opts) {
  const PrecisionContext work = ctx.with_extra_bits(32);
  const BigComplex sw = s.rounded_to(work);
  if (sw.re == 1 && sw.im.is_zero()) throw InputError("zeta: pole at s = 1");
  // Nearest zero 1 + 2 pi i k / ln 2 of the eta factor.
  const BigReal period = pi(work) * 2 / log_int(2, work);
  BigReal k_real = sw.im / period;
  mpfr_round(k_real.raw(), k_real.raw());
  BigComplex nearest(BigReal(1, work), period * k_real);
  if (abs(sw - nearest) < pow10(-10, work)) {
    throw InputError("zeta: s lies within 1e-10 of a zero of 1 - 2^(1-s); use another representation");
  }
  BigComplex eta_val = eta(s, work, opts);
  BigComplex one_minus(BigReal(1, work), BigReal(0, work));
  one_minus -= pow_int_neg_s(2, sw, work) * BigReal(2, work);
  return (eta_val / one_minus).rounded_to(ctx);
}

// ---------------------------------------------------------------------------

BigReal default_newton_tolerance(const PrecisionContext& ctx) {
  return pow10(-(ctx.decimal_digits() / 2), ctx);
}

NewtonResult newton_root(const FiniteDirichletSeries& f, const BigComplex& s0, const BigReal& tol_in,
                         int max_iter) {
  const PrecisionContext ctx = f.context();
  const BigReal tol = tol_in.rounded_to(ctx);
  const BigReal breakdown = pow10(-(ctx.decimal_digits() - 10), ctx);
  BigComplex s = s0.rounded_to(ctx);
  for (int it = 1; it <= max_iter; ++it) {
    auto [fv, fd] = evaluate_both(f, s, true);
    if (abs(fd) < breakdown) {
      throw NumericalError("newton_root: derivative vanished at iteration " + std::to_string(it));
    }
    const BigComplex step = fv / fd;
    s -= step;
    if (abs(step) < tol) {
      BigReal residual = abs(evaluate(f, s));
      return {std::move(s), std::move(residual), it};
    }
  }
  throw ConvergenceError("newton_root: no convergence within " + std::to_string(max_iter) + " iterations");
}

// ---------------------------------------------------------------------------

MuTable dirichlet_divide(const FiniteDirichletSeries& delta, std::size_t terms) {
  if (terms == 0) throw InputError("dirichlet_divide: need at least one term");
  if (delta.size() == 0 || !(delta[1] == 1)) {
    throw InputError("dirichlet_divide: leading coefficient must be exactly 1");
  }
  const PrecisionContext ctx = delta.context();
  // acc[n] collects sum_{d|n, d<n} mu_d in increasing d.
  std::vector<BigReal> acc(terms + 1, BigReal(ctx));
  MuTable out;
  out.source_terms = delta.size();
  out.mu.reserve(terms);
  for (std::size_t n = 1; n <= terms; ++n) {
    BigReal mu = n <= delta.size() ? delta[n] : BigReal(ctx);
    mu -= acc[n];
    for (std::size_t m = 2 * n; m <= terms; m += n) acc[m] += mu;
    out.mu.push_back(std::move(mu));
  }
  return out;
}

BigReal division_defect(const FiniteDirichletSeries& delta, const MuTable& mu) {
  const PrecisionContext ctx = delta.context();
  const std::size_t terms = mu.size();
  std::vector<BigReal> conv(terms + 1, BigReal(ctx));
  for (std::size_t d = 1; d <= terms; ++d) {
    for (std::size_t m = d; m <= terms; m += d) conv[m] += mu[d];
  }
  BigReal worst(ctx);
  for (std::size_t n = 1; n <= terms; ++n) {
    BigReal target = n <= delta.size() ? delta[n] : BigReal(ctx);
    BigReal gap = abs(conv[n] - target);
    if (gap > worst) worst = std::move(gap);
  }
  return worst;
}

BigComplex rational_eval(const FiniteDirichletSeries& delta, const MuTable& mu, std::size_t terms,
                         const BigComplex& s) {
  if (terms == 0 || terms > mu.size()) {
    throw InputError("rational_eval: denominator terms must be in 1.." + std::to_string(mu.size()));
  }
  const PrecisionContext ctx = delta.context();
  FiniteDirichletSeries denominator;
  denominator.coeffs.assign(mu.mu.begin(), mu.mu.begin() + static_cast<std::ptrdiff_t>(terms));
  const BigComplex den = evaluate(denominator, s);
  if (abs(den) < pow10(-(ctx.decimal_digits() - 10), ctx)) {
    throw NumericalError("rational_eval: denominator vanishes to working precision");
  }
  return evaluate(delta, s) / den;
}

}  // namespace dzeta
