#pragma once

#include <cstddef>
#include <vector>

#include "dzeta/numerics.hpp"

namespace dzeta {

/// Finite Dirichlet series sum_{n=1}^N a_n n^{-s} with real coefficients.
/// coeffs[0] holds a_1.
struct FiniteDirichletSeries {
  std::vector<BigReal> coeffs;

  std::size_t size() const { return coeffs.size(); }
  PrecisionContext context() const;
  const BigReal& operator[](std::size_t n) const { return coeffs.at(n - 1); }

  /// Truncated zeta: all coefficients 1.
  static FiniteDirichletSeries ones(std::size_t n, const PrecisionContext& ctx);
  /// Truncated eta: coefficients (-1)^{n+1}.
  static FiniteDirichletSeries alternating(std::size_t n, const PrecisionContext& ctx);
};

/// Coefficients of the formal quotient delta / zeta, truncated to L terms.
struct MuTable {
  std::size_t source_terms = 0;  // N of the series that was divided
  std::vector<BigReal> mu;       // mu[0] = mu_1

  std::size_t size() const { return mu.size(); }
  const BigReal& operator[](std::size_t n) const { return mu.at(n - 1); }
};

BigComplex evaluate(const FiniteDirichletSeries& f, const BigComplex& s);
BigComplex evaluate_derivative(const FiniteDirichletSeries& f, const BigComplex& s);

/// Height cap for the accelerated eta sum. The term count grows like
/// |Im s| * pi / (2 ln(3 + sqrt 8)), so beyond a few hundred the cost is
/// the concern rather than correctness; callers may raise the cap.
struct EtaOptions {
  double max_height = 400.0;
};

/// Number of accelerated terms used for eta at `s` with `digits` target digits.
std::size_t eta_term_count(const BigComplex& s, long digits);

BigComplex eta(const BigComplex& s, const PrecisionContext& ctx, const EtaOptions& opts = {});

struct EtaWithDerivative {
  BigComplex value;
  BigComplex derivative;
};
EtaWithDerivative eta_with_derivative(const BigComplex& s, const PrecisionContext& ctx,
                                      const EtaOptions& opts = {});

/// zeta(s) = eta(s) / (1 - 2^{1-s}). Throws InputError at the pole and next
/// to any zero 1 + 2 pi i k / ln 2 of the denominator.
BigComplex zeta(const BigComplex& s, const PrecisionContext& ctx, const EtaOptions& opts = {});

struct NewtonResult {
  BigComplex root;
  BigReal residual;  // |f(root)|
  int iterations = 0;
};

/// 10^{-D/2}, D the decimal capacity of ctx.
BigReal default_newton_tolerance(const PrecisionContext& ctx);

/// Plain Newton iteration on f from s0. Stops at the first iterate whose step
/// is below tol. Throws ConvergenceError after max_iter steps and
/// NumericalError when |f'| drops below 10^{-D+10}.
NewtonResult newton_root(const FiniteDirichletSeries& f, const BigComplex& s0, const BigReal& tol,
                         int max_iter);

/// mu with sum_{d|n} mu_d = delta_n for n <= terms (delta_n = 0 past N).
MuTable dirichlet_divide(const FiniteDirichletSeries& delta, std::size_t terms);

/// max_{n <= L} |sum_{d|n} mu_d - delta_n|.
BigReal division_defect(const FiniteDirichletSeries& delta, const MuTable& mu);

/// evaluate(delta, s) / sum_{n<=terms} mu_n n^{-s}.
BigComplex rational_eval(const FiniteDirichletSeries& delta, const MuTable& mu, std::size_t terms,
                         const BigComplex& s);

}  // namespace dzeta
