#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dzeta/solver.hpp"

namespace dzeta {

/// One point of log10|delta_{N,n} - 1| tagged with its Eratosthenes level
/// (the smallest prime factor of n).
struct LevelPoint {
  long n = 0;
  double height = 0;  // -inf when delta_n == 1 exactly
  long level = 0;
  bool is_prime_n = false;
  bool floored = false;  // below the table's correct-digit budget
};

/// Point of log10|delta_{N,m d} - delta_{N,d}| along the progression d, 2d, ...
struct SublevelPoint {
  long d = 0;
  long m = 0;
  double height = 0;
  std::optional<long> sublevel;  // nullopt: no prime within the bound divides m
  bool floored = false;
};

std::vector<long> primes_up_to(long bound);
bool is_prime(long n);

/// Smallest prime factor of n >= 2.
long level_classify(long n);

/// Primes up to `bound` ordered by p^{k_p + 1}, k_p the exponent of p in d.
std::vector<long> sublevel_order(long d, long bound);

/// First prime of sublevel_order(d, bound) dividing m.
std::optional<long> sublevel_classify(long m, long d, long bound);

/// Level points for n = 2..n_max. Requires table.est_digits.
std::vector<LevelPoint> level_table(const DeltaTable& table, long n_max);

/// Sublevel points for m = 2..floor(n_max / d); the prime bound is n_max.
std::vector<SublevelPoint> sublevel_table(const DeltaTable& table, long d, long n_max);

struct BandStats {
  long level = 0;
  std::size_t count = 0;
  double min = 0;
  double mean = 0;
  double max = 0;
};

struct BandVerdict {
  long upper = 0;  // smaller prime, expected higher band
  long lower = 0;
  bool separated = false;  // min over `upper` exceeds max over `lower`
};

struct BandReport {
  std::vector<BandStats> bands;      // sorted by prime
  std::vector<BandVerdict> verdicts;  // consecutive levels present
  std::size_t floored_excluded = 0;
  std::size_t primes_excluded = 0;

  const BandStats* band(long level) const;
  const BandVerdict* verdict(long upper, long lower) const;
};

/// Per-level statistics over points with n <= n_window. Floored points are
/// always excluded; prime n only when include_primes is false.
BandReport band_report(const std::vector<LevelPoint>& points, long n_window, bool include_primes = false);

enum class PlotFormat { Csv };

/// Writes the CSV plus a gnuplot script next to it that reads the CSV by its
/// relative file name. Returns the script path.
std::filesystem::path export_plot_data(const std::vector<LevelPoint>& points, PlotFormat format,
                                       const std::filesystem::path& csv_path);
std::filesystem::path export_plot_data(const std::vector<SublevelPoint>& points, PlotFormat format,
                                       const std::filesystem::path& csv_path);

/// Height formatting used in every CSV: 8 significant digits.
std::string format_height(double h);

}  // namespace dzeta
