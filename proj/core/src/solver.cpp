#include "dzeta/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <thread>
#include <unordered_map>

namespace dzeta {

namespace {

// Splits [begin, end) into contiguous chunks, one per worker. Each index is
// processed by exactly one worker with a fixed operation sequence, so the
// result is independent of the split.
template <class Fn>
void parallel_rows(std::size_t begin, std::size_t end, unsigned threads, Fn&& fn) {
  const std::size_t count = end > begin ? end - begin : 0;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 1; w < workers; ++w) {
    const std::size_t lo = begin + w * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (std::size_t i = begin; i < std::min(end, begin + chunk); ++i) fn(i);
}

void check_zero_supply(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx,
                       std::optional<long> min_digits = std::nullopt) {
  if (M < 0) throw InputError("M must be non-negative");
  if (static_cast<std::size_t>(M) > zeros.size()) {
    throw InputError("need " + std::to_string(M) + " zeros, only " + std::to_string(zeros.size()) +
                     " available");
  }
  const long needed = min_digits.value_or((ctx.decimal_digits() * 9 + 9) / 10);
  for (int k = 0; k < M; ++k) {
    if (zeros[k].verified_digits < needed) {
      throw InputError("zero " + std::to_string(zeros[k].index) + " carries " +
                       std::to_string(zeros[k].verified_digits) + " digits; working precision needs " +
                       std::to_string(needed));
    }
  }
}

DeltaTable trivial_table(const PrecisionContext& ctx) {
  DeltaTable t{1, 0, {}, ctx, std::nullopt};
  t.coeffs.emplace_back(1, ctx);
  return t;
}

// Row update a_i -= f * a_j on columns [from, dim) plus the rhs, one rounding
// per entry.
void eliminate_row(RealSystem& sys, std::size_t pivot_row, std::size_t row, std::size_t from,
                   const BigReal& pivot) {
  const std::size_t dim = sys.dim();
  BigReal factor = sys.at(row, from) / pivot;
  for (std::size_t c = from + 1; c < dim; ++c) {
    mpfr_ptr a = sys.at(row, c).raw();
    mpfr_fms(a, factor.raw(), sys.at(pivot_row, c).raw(), a, MPFR_RNDN);
    mpfr_neg(a, a, MPFR_RNDN);
  }
  mpfr_ptr b = sys.rhs[row].raw();
  mpfr_fms(b, factor.raw(), sys.rhs[pivot_row].raw(), b, MPFR_RNDN);
  mpfr_neg(b, b, MPFR_RNDN);
  mpfr_set_zero(sys.at(row, from).raw(), 1);
}

// Solves the leading size x size upper-triangular block.
std::vector<BigReal> back_substitute(const RealSystem& sys, std::size_t size, const PrecisionContext& ctx) {
  std::vector<BigReal> x(size, BigReal(ctx));
  BigReal acc(ctx);
  for (std::size_t j = size; j-- > 0;) {
    acc = sys.rhs[j];
    for (std::size_t k = j + 1; k < size; ++k) {
      mpfr_fms(acc.raw(), sys.at(j, k).raw(), x[k].raw(), acc.raw(), MPFR_RNDN);
      mpfr_neg(acc.raw(), acc.raw(), MPFR_RNDN);
    }
    x[j] = acc / sys.at(j, j);
  }
  return x;
}

DeltaTable table_from_solution(int M, std::vector<BigReal> x, const PrecisionContext& ctx) {
  DeltaTable t{2 * M + 1, M, {}, ctx, std::nullopt};
  t.coeffs.reserve(x.size() + 1);
  t.coeffs.emplace_back(1, ctx);
  for (auto& v : x) t.coeffs.push_back(std::move(v));
  return t;
}

BigReal pivot_threshold(const PrecisionContext& ctx) { return pow10(-(ctx.decimal_digits() - 10), ctx); }

}  // namespace

// Measured elimination loss is about 0.7 digits per zero pair up to M = 250.
long guard_digits(int M) { return 10 + static_cast<long>(M); }

PrecisionContext working_context(long requested_digits, int M) {
  return PrecisionContext::from_digits(requested_digits + guard_digits(M));
}

RealSystem build_system(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx,
                        std::optional<long> min_zero_digits) {
  check_zero_supply(zeros, M, ctx, min_zero_digits);
  RealSystem sys;
  sys.M = M;
  const std::size_t dim = sys.dim();
  sys.entries.assign(dim * dim, BigReal(ctx));
  sys.rhs.assign(dim, BigReal(ctx));
  // n^{-1/2} per column, shared by every row.
  std::vector<BigReal> inv_sqrt;
  inv_sqrt.reserve(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    BigReal v(static_cast<long>(c + 2), ctx);
    mpfr_rec_sqrt(v.raw(), v.raw(), MPFR_RNDN);
    inv_sqrt.push_back(std::move(v));
  }
  BigReal phase(ctx), sn(ctx), cs(ctx);
  for (int k = 0; k < M; ++k) {
    const BigReal gamma = zeros[k].gamma.rounded_to(ctx);
    const std::size_t cos_row = 2 * static_cast<std::size_t>(k);
    for (std::size_t c = 0; c < dim; ++c) {
      mpfr_mul(phase.raw(), gamma.raw(), log_int(c + 2, ctx).raw(), MPFR_RNDN);
      mpfr_sin_cos(sn.raw(), cs.raw(), phase.raw(), MPFR_RNDN);
      mpfr_mul(sys.at(cos_row, c).raw(), cs.raw(), inv_sqrt[c].raw(), MPFR_RNDN);
      mpfr_mul(sys.at(cos_row + 1, c).raw(), sn.raw(), inv_sqrt[c].raw(), MPFR_RNDN);
    }
    sys.rhs[cos_row] = BigReal(-1, ctx);
  }
  return sys;
}

DeltaTable solve_delta(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx,
                       const SolveOptions& opts) {
  if (M == 0) {
    check_zero_supply(zeros, 0, ctx);
    return trivial_table(ctx);
  }
  RealSystem sys = build_system(zeros, M, ctx, opts.min_zero_digits);
  const std::size_t dim = sys.dim();
  const BigReal threshold = pivot_threshold(ctx);
  for (std::size_t j = 0; j < dim; ++j) {
    // First row attaining the largest modulus wins, for reproducibility.
    std::size_t best = j;
    for (std::size_t r = j + 1; r < dim; ++r) {
      if (mpfr_cmpabs(sys.at(r, j).raw(), sys.at(best, j).raw()) > 0) best = r;
    }
    if (mpfr_cmpabs(sys.at(best, j).raw(), threshold.raw()) < 0) {
      throw NumericalError("solve_delta: system for M = " + std::to_string(M) +
                           " is singular to working precision at column " + std::to_string(j));
    }
    if (best != j) {
      for (std::size_t c = 0; c < dim; ++c) std::swap(sys.at(best, c), sys.at(j, c));
      std::swap(sys.rhs[best], sys.rhs[j]);
    }
    const BigReal& pivot = sys.at(j, j);
    parallel_rows(j + 1, dim, opts.threads, [&](std::size_t r) { eliminate_row(sys, j, r, j, pivot); });
  }
  return table_from_solution(M, back_substitute(sys, dim, ctx), ctx);
}

std::vector<DeltaTable> solve_delta_ladder(const std::vector<ZetaZero>& zeros, int m_max,
                                           const PrecisionContext& ctx, const SolveOptions& opts) {
  if (m_max < 1) throw InputError("ladder needs M_max >= 1");
  RealSystem sys = build_system(zeros, m_max, ctx, opts.min_zero_digits);
  const std::size_t dim = sys.dim();
  const BigReal threshold = pivot_threshold(ctx);
  std::vector<DeltaTable> tables;
  tables.reserve(static_cast<std::size_t>(m_max));
  for (std::size_t j = 0; j < dim; ++j) {
    const BigReal& pivot = sys.at(j, j);
    if (mpfr_cmpabs(pivot.raw(), threshold.raw()) < 0) {
      const int failing = static_cast<int>(j / 2) + 1;
      throw LadderBreakdown(failing, "ladder: leading block for M = " + std::to_string(failing) +
                                         " has a vanishing pivot; fall back to solve_delta");
    }
    parallel_rows(j + 1, dim, opts.threads, [&](std::size_t r) { eliminate_row(sys, j, r, j, pivot); });
    if (j % 2 == 1) {
      const int M = static_cast<int>(j + 1) / 2;
      tables.push_back(table_from_solution(M, back_substitute(sys, j + 1, ctx), ctx));
    }
  }
  return tables;
}

// ---------------------------------------------------------------------------
// Determinant oracle

namespace {

using ComplexMatrix = std::vector<std::vector<BigComplex>>;

// Laplace expansion along the first remaining row; minors are shared through
// a memo keyed by the set of columns still in play.
class CofactorDeterminant {
 public:
  CofactorDeterminant(const ComplexMatrix& m, const PrecisionContext& ctx) : m_(m), ctx_(ctx) {}

  BigComplex operator()() {
    memo_.clear();
    const std::uint32_t all = m_.empty() ? 0u : ((1u << m_.size()) - 1u);
    return minor(0, all);
  }

 private:
  BigComplex minor(std::size_t row, std::uint32_t cols) {
    if (cols == 0) return BigComplex(BigReal(1, ctx_), BigReal(0, ctx_));
    if (auto it = memo_.find(cols); it != memo_.end()) return it->second;
    BigComplex sum(ctx_);
    int position = 0;
    for (std::size_t c = 0; c < m_.size(); ++c) {
      if (!(cols & (1u << c))) continue;
      BigComplex term = m_[row][c] * minor(row + 1, cols & ~(1u << c));
      if (position % 2 == 0) {
        sum += term;
      } else {
        sum -= term;
      }
      ++position;
    }
    memo_.emplace(cols, sum);
    return sum;
  }

  const ComplexMatrix& m_;
  PrecisionContext ctx_;
  std::unordered_map<std::uint32_t, BigComplex> memo_;
};

}  // namespace

std::vector<BigComplex> cramer_ratios(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx) {
  if (M > 4) throw InputError("cramer_delta_small supports M <= 4");
  check_zero_supply(zeros, M, ctx);
  const PrecisionContext work = ctx.with_extra_bits(64);
  const int N = 2 * M + 1;
  // rows[n-1][2k] = n^{-conj(rho_k)}, rows[n-1][2k+1] = n^{-rho_k}
  ComplexMatrix rows(static_cast<std::size_t>(N));
  for (int k = 0; k < M; ++k) {
    const BigComplex rho(BigReal::ratio(1, 2, work), zeros[k].gamma.rounded_to(work));
    const BigComplex rho_bar = conj(rho);
    for (int n = 1; n <= N; ++n) {
      rows[n - 1].push_back(pow_int_neg_s(n, rho_bar, work));
      rows[n - 1].push_back(pow_int_neg_s(n, rho, work));
    }
  }
  std::vector<BigComplex> tilde;
  tilde.reserve(static_cast<std::size_t>(N));
  for (int n = 1; n <= N; ++n) {
    ComplexMatrix minor;
    for (int r = 1; r <= N; ++r) {
      if (r != n) minor.push_back(rows[r - 1]);
    }
    BigComplex det = CofactorDeterminant(minor, work)();
    tilde.push_back(n % 2 == 1 ? det : -det);
  }
  if (abs(tilde[0]) < pow10(-(ctx.decimal_digits() - 10), work)) {
    throw NumericalError("cramer_delta_small: leading determinant vanishes to working precision");
  }
  std::vector<BigComplex> ratios;
  ratios.reserve(tilde.size());
  for (const auto& t : tilde) ratios.push_back((t / tilde[0]).rounded_to(ctx));
  return ratios;
}

DeltaTable cramer_delta_small(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx) {
  auto ratios = cramer_ratios(zeros, M, ctx);
  DeltaTable t{2 * M + 1, M, {}, ctx, std::nullopt};
  t.coeffs.reserve(ratios.size());
  for (auto& r : ratios) t.coeffs.push_back(std::move(r.re));
  t.coeffs[0] = BigReal(1, ctx);
  return t;
}

AccuracyEstimate estimate_accuracy(DeltaTable& coarse, const DeltaTable& fine) {
  if (coarse.N != fine.N || coarse.coeffs.size() != fine.coeffs.size()) {
    throw InputError("estimate_accuracy: tables have different N (" + std::to_string(coarse.N) + " vs " +
                     std::to_string(fine.N) + ")");
  }
  AccuracyEstimate est;
  est.per_coeff.reserve(coarse.coeffs.size());
  est.summary = std::min(coarse.context.decimal_digits(), fine.context.decimal_digits());
  for (std::size_t i = 0; i < coarse.coeffs.size(); ++i) {
    const long d = agreement_digits(coarse.coeffs[i], fine.coeffs[i]);
    est.per_coeff.push_back(d);
    est.summary = std::min(est.summary, d);
  }
  coarse.est_digits = est.summary;
  return est;
}

DeltaTable solve_delta_estimated(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx,
                                 const SolveOptions& opts) {
  DeltaTable table = solve_delta(zeros, M, ctx, opts);
  SolveOptions companion = opts;
  companion.min_zero_digits = opts.min_zero_digits.value_or((ctx.decimal_digits() * 9 + 9) / 10);
  const DeltaTable fine = solve_delta(zeros, M, ctx.scaled(2), companion);
  estimate_accuracy(table, fine);
  return table;
}

BigReal defining_residual(const DeltaTable& table, const std::vector<ZetaZero>& zeros) {
  const PrecisionContext ctx = table.context;
  const FiniteDirichletSeries f = table.series();
  BigReal worst(ctx);
  for (int k = 0; k < table.M; ++k) {
    const BigComplex s(BigReal::ratio(1, 2, ctx), zeros.at(static_cast<std::size_t>(k)).gamma.rounded_to(ctx));
    BigReal r = abs(evaluate(f, s));
    if (r > worst) worst = std::move(r);
  }
  return worst;
}

}  // namespace dzeta
