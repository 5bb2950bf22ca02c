#pragma once

#include <optional>
#include <vector>

#include "dzeta/numerics.hpp"
#include "dzeta/series.hpp"
#include "dzeta/zeros.hpp"

namespace dzeta {

/// Real form of the interpolation conditions for Delta_N, N = 2M + 1.
/// Unknowns are delta_2..delta_N (column n-2). Row 2k-2 is the cosine row of
/// gamma_k, row 2k-1 its sine row.
struct RealSystem {
  int M = 0;
  std::vector<BigReal> entries;  // row-major, dim x dim
  std::vector<BigReal> rhs;

  std::size_t dim() const { return static_cast<std::size_t>(2 * M); }
  BigReal& at(std::size_t r, std::size_t c) { return entries[r * dim() + c]; }
  const BigReal& at(std::size_t r, std::size_t c) const { return entries[r * dim() + c]; }
};

struct DeltaTable {
  int N = 1;
  int M = 0;
  std::vector<BigReal> coeffs;  // coeffs[0] = delta_{N,1} = 1
  PrecisionContext context;
  std::optional<long> est_digits;

  const BigReal& operator[](std::size_t n) const { return coeffs.at(n - 1); }
  FiniteDirichletSeries series() const { return FiniteDirichletSeries{coeffs}; }
};

struct SolveOptions {
  unsigned threads = 1;  // workers for row updates; results do not depend on it
  /// Digits each zero must carry. Unset: 90% of the working capacity. The
  /// accuracy companion run sets it to the primary run's requirement, since
  /// it treats the same ordinates as exact inputs.
  std::optional<long> min_zero_digits;
};

/// Guard-digit policy: requested digits plus a margin growing with M.
long guard_digits(int M);
PrecisionContext working_context(long requested_digits, int M);

RealSystem build_system(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx,
                        std::optional<long> min_zero_digits = std::nullopt);

/// Gauss elimination with partial pivoting. Throws NumericalError when a
/// pivot falls below 10^{-D+10}.
DeltaTable solve_delta(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx,
                       const SolveOptions& opts = {});

/// Thrown by the ladder when a leading block is singular to working precision.
class LadderBreakdown : public NumericalError {
 public:
  LadderBreakdown(int failing_m, const std::string& what) : NumericalError(what), failing_m_(failing_m) {}
  int failing_m() const noexcept { return failing_m_; }

 private:
  int failing_m_;
};

/// One elimination without row exchanges over the M_max system; the solution
/// of every leading 2M x 2M block is harvested on the way, M = 1..M_max.
std::vector<DeltaTable> solve_delta_ladder(const std::vector<ZetaZero>& zeros, int m_max,
                                           const PrecisionContext& ctx, const SolveOptions& opts = {});

/// Complex ratios tilde-delta_n / tilde-delta_1 from the bordered determinants
/// of n^{-rho}, n^{-conj(rho)}, expanded by cofactors. M <= 4.
std::vector<BigComplex> cramer_ratios(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx);

/// Real parts of cramer_ratios packaged as a table.
DeltaTable cramer_delta_small(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx);

struct AccuracyEstimate {
  std::vector<long> per_coeff;  // agreement digits for delta_1..delta_N
  long summary = 0;             // minimum over n
};

/// Compares a table with a higher-precision recomputation and stores the
/// summary into coarse.est_digits.
AccuracyEstimate estimate_accuracy(DeltaTable& coarse, const DeltaTable& fine);

/// solve_delta at ctx plus a companion at twice the bits; the estimate is
/// stored on the returned table.
DeltaTable solve_delta_estimated(const std::vector<ZetaZero>& zeros, int M, const PrecisionContext& ctx,
                                 const SolveOptions& opts = {});

/// max_{k <= M} |Delta_N(1/2 + i gamma_k)|.
BigReal defining_residual(const DeltaTable& table, const std::vector<ZetaZero>& zeros);

}  // namespace dzeta
