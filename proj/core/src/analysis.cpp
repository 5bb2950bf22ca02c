#include "dzeta/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

namespace dzeta {

std::vector<long> primes_up_to(long bound) {
  std::vector<long> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (long p = 2; p <= bound; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    primes.push_back(p);
    for (long q = p * p; q <= bound; q += p) composite[static_cast<std::size_t>(q)] = true;
  }
  return primes;
}

bool is_prime(long n) { return n >= 2 && level_classify(n) == n; }

long level_classify(long n) {
  if (n < 2) throw InputError("level_classify needs n >= 2");
  if (n % 2 == 0) return 2;
  for (long p = 3; p * p <= n; p += 2) {
    if (n % p == 0) return p;
  }
  return n;
}

std::vector<long> sublevel_order(long d, long bound) {
  if (d < 1) throw InputError("sublevel_order needs d >= 1");
  struct Keyed {
    long prime;
    double log_key;  // (k_p + 1) log p
  };
  std::vector<Keyed> keyed;
  for (long p : primes_up_to(bound)) {
    long k = 0;
    for (long r = d; r % p == 0; r /= p) ++k;
    keyed.push_back({p, static_cast<double>(k + 1) * std::log(static_cast<double>(p))});
  }
  // Distinct prime powers never coincide, so the keys are strictly ordered;
  // ties in floating point are broken by the prime itself.
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (std::fabs(a.log_key - b.log_key) > 1e-12) return a.log_key < b.log_key;
    return a.prime < b.prime;
  });
  std::vector<long> order;
  order.reserve(keyed.size());
  for (const auto& k : keyed) order.push_back(k.prime);
  return order;
}

std::optional<long> sublevel_classify(long m, long d, long bound) {
  if (m < 2) throw InputError("sublevel_classify needs m >= 2");
  for (long p : sublevel_order(d, bound)) {
    if (m % p == 0) return p;
  }
  return std::nullopt;
}

namespace {

long require_estimate(const DeltaTable& table) {
  if (!table.est_digits) {
    throw InputError("table for N = " + std::to_string(table.N) +
                     " has no accuracy estimate; recompute without --no-estimate");
  }
  return *table.est_digits;
}

double log10_gap(const BigReal& a, const BigReal& b) {
  BigReal diff = a - b;
  return diff.log10_abs();
}

}  // namespace

std::vector<LevelPoint> level_table(const DeltaTable& table, long n_max) {
  const long est = require_estimate(table);
  if (n_max > table.N) throw InputError("level_table: n_max exceeds N");
  const BigReal one(1, table.context);
  std::vector<LevelPoint> points;
  for (long n = 2; n <= n_max; ++n) {
    LevelPoint p;
    p.n = n;
    p.height = log10_gap(table[static_cast<std::size_t>(n)], one);
    p.level = level_classify(n);
    p.is_prime_n = p.level == n;
    p.floored = p.height < static_cast<double>(-est);
    points.push_back(p);
  }
  return points;
}

std::vector<SublevelPoint> sublevel_table(const DeltaTable& table, long d, long n_max) {
  const long est = require_estimate(table);
  if (d < 1 || n_max > table.N) throw InputError("sublevel_table: need d >= 1 and n_max <= N");
  const auto order = sublevel_order(d, n_max);
  const BigReal& base = table[static_cast<std::size_t>(d)];
  std::vector<SublevelPoint> points;
  for (long m = 2; m * d <= n_max; ++m) {
    SublevelPoint p;
    p.d = d;
    p.m = m;
    p.height = log10_gap(table[static_cast<std::size_t>(m * d)], base);
    for (long q : order) {
      if (m % q == 0) {
        p.sublevel = q;
        break;
      }
    }
    p.floored = p.height < static_cast<double>(-est);
    points.push_back(p);
  }
  return points;
}

const BandStats* BandReport::band(long level) const {
  for (const auto& b : bands) {
    if (b.level == level) return &b;
  }
  return nullptr;
}

const BandVerdict* BandReport::verdict(long upper, long lower) const {
  for (const auto& v : verdicts) {
    if (v.upper == upper && v.lower == lower) return &v;
  }
  return nullptr;
}

BandReport band_report(const std::vector<LevelPoint>& points, long n_window, bool include_primes) {
  BandReport report;
  std::map<long, std::vector<double>> by_level;
  bool any = false;
  for (const auto& p : points) {
    if (p.n > n_window) continue;
    any = true;
    if (p.floored) {
      ++report.floored_excluded;
      continue;
    }
    if (p.is_prime_n && !include_primes) {
      ++report.primes_excluded;
      continue;
    }
    by_level[p.level].push_back(p.height);
  }
  if (!any || by_level.empty()) throw InputError("band_report: no usable points within the window");
  for (const auto& [level, hs] : by_level) {
    BandStats s;
    s.level = level;
    s.count = hs.size();
    s.min = *std::min_element(hs.begin(), hs.end());
    s.max = *std::max_element(hs.begin(), hs.end());
    double sum = 0;
    for (double h : hs) sum += h;
    s.mean = sum / static_cast<double>(hs.size());
    report.bands.push_back(s);
  }
  for (std::size_t i = 0; i + 1 < report.bands.size(); ++i) {
    const auto& hi = report.bands[i];
    const auto& lo = report.bands[i + 1];
    report.verdicts.push_back({hi.level, lo.level, hi.min > lo.max});
  }
  return report;
}

std::string format_height(double h) {
  if (std::isinf(h)) return h < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8g", h);
  return buf;
}

namespace {

std::filesystem::path write_script(const std::filesystem::path& csv_path, const std::string& title,
                                   const std::string& x_column, int color_column) {
  auto script = csv_path;
  script.replace_extension(".gp");
  std::ofstream out(script);
  if (!out) throw InputError("cannot write " + script.string());
  const std::string csv = csv_path.filename().string();
  out << "# gnuplot script; run from this directory: gnuplot -p " << script.filename().string() << "\n"
      << "set datafile separator ','\n"
      << "set key off\n"
      << "set title '" << title << "'\n"
      << "set xlabel '" << x_column << "'\n"
      << "set ylabel 'log10 height'\n"
      << "plot '" << csv << "' every ::1 using 1:2";
  if (color_column > 0) {
    out << ":" << color_column << " with points pt 7 ps 0.6 lc variable\n";
  } else {
    out << " with points pt 7 ps 0.6\n";
  }
  return script;
}

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

}  // namespace

std::filesystem::path export_plot_data(const std::vector<LevelPoint>& points, PlotFormat,
                                       const std::filesystem::path& csv_path) {
  auto out = open_csv(csv_path);
  out << "n,height,level,is_prime_n,floored\n";
  for (const auto& p : points) {
    out << p.n << ',' << format_height(p.height) << ',' << p.level << ',' << (p.is_prime_n ? 1 : 0) << ','
        << (p.floored ? 1 : 0) << '\n';
  }
  if (!out) throw InputError("I/O failure writing " + csv_path.string());
  return write_script(csv_path, "log10|delta_n - 1| by Eratosthenes level", "n", 3);
}

std::filesystem::path export_plot_data(const std::vector<SublevelPoint>& points, PlotFormat,
                                       const std::filesystem::path& csv_path) {
  auto out = open_csv(csv_path);
  out << "m,height,sublevel,d,n,floored\n";
  for (const auto& p : points) {
    out << p.m << ',' << format_height(p.height) << ','
        << (p.sublevel ? std::to_string(*p.sublevel) : std::string("coprime")) << ',' << p.d << ','
        << p.m * p.d << ',' << (p.floored ? 1 : 0) << '\n';
  }
  if (!out) throw InputError("I/O failure writing " + csv_path.string());
  return write_script(csv_path, "log10|delta_{md} - delta_d| by sublevel", "m", 0);
}

}  // namespace dzeta
