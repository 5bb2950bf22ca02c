#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dzeta/numerics.hpp"
#include "dzeta/series.hpp"

namespace dzeta {

/// Ordinate gamma_k of the nontrivial zero 1/2 + i gamma_k.
struct ZetaZero {
  int index = 0;
  BigReal gamma;
  long verified_digits = 0;  // significant digits carried by the source
  std::string source;
};

/// Significant decimal digits in a plain or scientific number string.
long count_significant_digits(std::string_view number);

/// Zero-file format: '#' lines are comments, blank lines are skipped, every
/// other line is one decimal ordinate, strictly increasing. Throws InputError
/// naming the offending line.
std::vector<ZetaZero> parse_zero_file(std::istream& in, long min_digits,
                                      const std::string& source = "<stream>");
std::vector<ZetaZero> load_zero_file(const std::filesystem::path& path, long min_digits);

/// Writes ordinates with `digits` significant digits in plain decimal.
void write_zero_file(std::ostream& out, const std::vector<ZetaZero>& zeros, long digits,
                     const std::vector<std::string>& comments = {});

/// Plain decimal rendering with `digits` significant digits.
std::string to_plain_decimal(const BigReal& x, long digits);

/// |eta(1/2 + i gamma)| evaluated at ctx.
BigReal verify_zero(const ZetaZero& z, const PrecisionContext& ctx, const EtaOptions& opts = {});

struct RefineOptions {
  double window = 0.25;        // iterates leaving this disk around the seed fail
  int max_iterations = 80;     // across all precision stages
  EtaOptions eta;
};

/// Newton iteration on eta from 1/2 + i gamma0, doubling precision per stage,
/// until the update drops below 10^{-target_digits}. Returns the ordinate.
BigReal refine_zero(const BigReal& gamma0, long target_digits, const RefineOptions& opts = {});

}  // namespace dzeta
