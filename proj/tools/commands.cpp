#include "commands.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dzeta/analysis.hpp"
#include "dzeta/series.hpp"
#include "dzeta/solver.hpp"
#include "dzeta/table_io.hpp"
#include "dzeta/zeros.hpp"

#ifndef DZETA_VERSION
#define DZETA_VERSION "dev"
#endif
#ifndef DZETA_DATA_DIR
#define DZETA_DATA_DIR "data"
#endif

namespace dzeta::cli {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

TableMetadata provenance(const RunConfig& cfg, const PrecisionContext& working, const std::string& method) {
  TableMetadata meta;
  meta.set("requested_digits", std::to_string(cfg.digits));
  meta.set("working_digits", std::to_string(working.decimal_digits()));
  meta.set("zeros_file", cfg.zeros_path.filename().string());
  meta.set("zeros_digest", "sha256:" + file_digest(cfg.zeros_path));
  meta.set("method", method);
  meta.set("version", DZETA_VERSION);
  if (!cfg.deterministic) meta.set("created", utc_timestamp());
  return meta;
}

std::filesystem::path table_path(const RunConfig& cfg, int N) {
  return cfg.output_dir / ("delta_N" + std::to_string(N) + ".csv");
}

std::vector<DeltaTable> ladder_or_fallback(const std::vector<ZetaZero>& zeros, int m_max,
                                           const PrecisionContext& ctx, const SolveOptions& opts,
                                           std::ostream& out) {
  try {
    return solve_delta_ladder(zeros, m_max, ctx, opts);
  } catch (const LadderBreakdown& e) {
    out << "warning: " << e.what() << "; solving each M separately\n";
    std::vector<DeltaTable> tables;
    for (int M = 1; M <= m_max; ++M) tables.push_back(solve_delta(zeros, M, ctx, opts));
    return tables;
  }
}

std::string short_sci(const BigReal& x, std::size_t digits) { return x.to_string(digits); }

std::string signed_sci(const BigReal& x, std::size_t digits) {
  std::string s = x.to_string(digits);
  return (s[0] == '-') ? s : "+" + s;
}

struct Target {
  std::string label;
  BigComplex point;
};

std::vector<Target> expand_targets(const std::vector<std::string>& specs, const RunConfig& cfg,
                                   const PrecisionContext& ctx) {
  std::vector<Target> targets;
  std::vector<ZetaZero> zeros;
  for (const auto& spec : specs) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw InputError("target '" + spec + "' must look like kind:indices");
    const std::string kind = spec.substr(0, colon);
    for (long k : parse_index_list(spec.substr(colon + 1))) {
      if (kind == "rho") {
        if (zeros.empty()) zeros = load_zero_file(cfg.zeros_path, 1);
        if (k < 1 || static_cast<std::size_t>(k) > zeros.size()) {
          throw InputError("zero index " + std::to_string(k) + " not in " + cfg.zeros_path.string());
        }
        targets.push_back({"rho_" + std::to_string(k),
                           BigComplex(BigReal::ratio(1, 2, ctx), zeros[static_cast<std::size_t>(k - 1)].gamma.rounded_to(ctx))});
      } else if (kind == "trivial") {
        targets.push_back({"trivial_-" + std::to_string(2 * k), BigComplex(BigReal(-2 * k, ctx), BigReal(ctx))});
      } else if (kind == "eta") {
        BigReal im = pi(ctx) * (2 * k) / log_int(2, ctx);
        targets.push_back({"eta_" + std::to_string(k), BigComplex(BigReal(1, ctx), std::move(im))});
      } else {
        throw InputError("unknown target kind '" + kind + "' (use rho, trivial or eta)");
      }
    }
  }
  return targets;
}

}  // namespace

std::vector<long> parse_index_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      auto dash = item.find('-', 1);
      if (dash == std::string::npos) {
        out.push_back(std::stol(item));
      } else {
        const long lo = std::stol(item.substr(0, dash));
        const long hi = std::stol(item.substr(dash + 1));
        if (hi < lo) throw InputError("descending range '" + item + "'");
        for (long k = lo; k <= hi; ++k) out.push_back(k);
      }
    } catch (const std::logic_error&) {
      throw InputError("bad index list '" + text + "'");
    }
  }
  if (out.empty()) throw InputError("empty index list");
  return out;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  EVP_MD_CTX* md = EVP_MD_CTX_new();
  EVP_DigestInit_ex(md, EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(md, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(md, hash, &len);
  EVP_MD_CTX_free(md);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(hash[i]);
  return os.str();
}

std::filesystem::path default_zeros_path() {
  return std::filesystem::path(DZETA_DATA_DIR) / "zeros_1-32_120d.txt";
}

// ---------------------------------------------------------------------------

int cmd_delta(const RunConfig& cfg, const DeltaOptions& opts, std::ostream& out) {
  if (cfg.digits < 30) throw InputError("--digits must be at least 30");
  const auto zeros = load_zero_file(cfg.zeros_path, cfg.digits);
  SolveOptions solve;
  solve.threads = cfg.threads;

  if (opts.ladder) {
    if (opts.m_max < 1) throw InputError("--ladder needs --m-max >= 1");
    const PrecisionContext ctx = working_context(cfg.digits, opts.m_max);
    auto tables = ladder_or_fallback(zeros, opts.m_max, ctx, solve, out);
    if (opts.estimate) {
      SolveOptions companion = solve;
      companion.min_zero_digits = (ctx.decimal_digits() * 9 + 9) / 10;
      const auto fine = ladder_or_fallback(zeros, opts.m_max, ctx.scaled(2), companion, out);
      for (std::size_t i = 0; i < tables.size(); ++i) estimate_accuracy(tables[i], fine[i]);
    }
    const TableMetadata meta = provenance(cfg, ctx, "ladder");
    for (const auto& t : tables) {
      save_delta_table(table_path(cfg, t.N), t, meta);
      out << "N=" << t.N << " M=" << t.M << " working_digits=" << ctx.decimal_digits()
          << " est_digits=" << (t.est_digits ? std::to_string(*t.est_digits) : "none") << " -> "
          << table_path(cfg, t.N).string() << '\n';
    }
    return kOk;
  }

  if (!opts.n) throw InputError("delta needs --n (or --ladder --m-max)");
  const int N = *opts.n;
  if (N < 1 || N % 2 == 0) throw InputError("--n must be a positive odd integer");
  const int M = (N - 1) / 2;
  const PrecisionContext ctx = working_context(cfg.digits, M);
  DeltaTable table = opts.estimate ? solve_delta_estimated(zeros, M, ctx, solve) : solve_delta(zeros, M, ctx, solve);
  const auto path = table_path(cfg, N);
  save_delta_table(path, table, provenance(cfg, ctx, "pivoted"));
  out << "N=" << N << " M=" << M << " working_digits=" << ctx.decimal_digits()
      << " est_digits=" << (table.est_digits ? std::to_string(*table.est_digits) : "none") << " -> "
      << path.string() << '\n';
  return kOk;
}

int cmd_hunt(const RunConfig& cfg, const HuntOptions& opts, std::ostream& out) {
  if (opts.targets.empty()) throw InputError("hunt needs --targets");
  const DeltaTable table = load_delta_table(opts.table);
  const PrecisionContext ctx = table.context;
  const FiniteDirichletSeries f = table.series();
  const BigReal tol = opts.tol_digits ? pow10(-*opts.tol_digits, ctx) : default_newton_tolerance(ctx);
  const auto targets = expand_targets(opts.targets, cfg, ctx);

  std::ostringstream csv;
  csv << "target,offset_re,offset_im,ordinate_offset_re,ordinate_offset_im,residual,iterations,status\n";
  int status = kOk;
  // tau solves Delta_N(1/2 + i(gamma + tau)) = 0, so root - target = i tau
  out << "zeros of Delta_" << table.N << " near targets (offset = root - target = i tau)\n";
  for (const auto& t : targets) {
    try {
      const NewtonResult r = newton_root(f, t.point, tol, opts.max_iter);
      const BigComplex offset = r.root - t.point;
      const BigComplex tau(offset.im, -offset.re);
      out << std::left << std::setw(14) << t.label << " offset " << signed_sci(offset.re, 6) << ' '
          << signed_sci(offset.im, 6) << "i  tau " << signed_sci(tau.re, 6) << ' ' << signed_sci(tau.im, 6)
          << "i  residual " << short_sci(r.residual, 3) << "  iterations " << r.iterations << '\n';
      csv << t.label << ',' << offset.re.to_string(12) << ',' << offset.im.to_string(12) << ','
          << tau.re.to_string(12) << ',' << tau.im.to_string(12) << ',' << r.residual.to_string(6) << ','
          << r.iterations << ",ok\n";
    } catch (const ConvergenceError& e) {
      out << std::left << std::setw(14) << t.label << " no convergence: " << e.what() << '\n';
      csv << t.label << ",,,,,," << opts.max_iter << ",no-convergence\n";
      status = kNonConvergence;
    } catch (const NumericalError& e) {
      out << std::left << std::setw(14) << t.label << " breakdown: " << e.what() << '\n';
      csv << t.label << ",,,,,,,breakdown\n";
      status = kNonConvergence;
    }
  }
  if (opts.report) {
    if (opts.report->has_parent_path()) std::filesystem::create_directories(opts.report->parent_path());
    std::ofstream rep(*opts.report);
    if (!rep) throw InputError("cannot write " + opts.report->string());
    rep << csv.str();
  }
  return status;
}

int cmd_levels(const RunConfig& cfg, const LevelsOptions& opts, std::ostream& out) {
  const DeltaTable table = load_delta_table(opts.table);
  const long n_max = opts.n_max.value_or(table.N);
  const auto points = level_table(table, n_max);
  const auto csv = cfg.output_dir / ("levels_N" + std::to_string(table.N) + ".csv");
  export_plot_data(points, PlotFormat::Csv, csv);

  const BandReport report = band_report(points, opts.window, opts.include_primes);
  std::ostringstream text;
  text << "Eratosthenes levels of Delta_" << table.N << " (n <= " << opts.window << ", est_digits "
       << *table.est_digits << ")\n";
  for (const auto& b : report.bands) {
    text << "  level " << std::setw(3) << b.level << ": count " << std::setw(3) << b.count << "  min "
         << format_height(b.min) << "  mean " << format_height(b.mean) << "  max " << format_height(b.max) << '\n';
  }
  for (const auto& v : report.verdicts) {
    text << "  bands (" << v.upper << ", " << v.lower << "): " << (v.separated ? "separated" : "overlapping") << '\n';
  }
  text << "  excluded: " << report.floored_excluded << " floored, " << report.primes_excluded << " prime n\n";
  out << text.str() << "  points -> " << csv.string() << '\n';
  {
    std::ofstream bands(cfg.output_dir / ("bands_N" + std::to_string(table.N) + ".txt"));
    bands << text.str();
  }

  if (opts.sublevel) {
    const long d = *opts.sublevel;
    const auto order = sublevel_order(d, n_max);
    out << "sublevel order for d=" << d << ":";
    for (std::size_t i = 0; i < std::min<std::size_t>(order.size(), 12); ++i) out << ' ' << order[i];
    out << (order.size() > 12 ? " ...\n" : "\n");
    const auto sub = sublevel_table(table, d, n_max);
    const auto sub_csv =
        cfg.output_dir / ("sublevels_N" + std::to_string(table.N) + "_d" + std::to_string(d) + ".csv");
    export_plot_data(sub, PlotFormat::Csv, sub_csv);
    out << "  sublevel points -> " << sub_csv.string() << '\n';
  }
  return kOk;
}

int cmd_divide(const RunConfig& cfg, const DivideOptions& opts, std::ostream& out) {
  if (opts.terms < 1) throw InputError("--terms must be at least 1");
  const DeltaTable table = load_delta_table(opts.table);
  const FiniteDirichletSeries delta = table.series();
  const MuTable mu = dirichlet_divide(delta, static_cast<std::size_t>(opts.terms));
  const auto path = opts.output.value_or(cfg.output_dir / ("mu_N" + std::to_string(table.N) + "_L" +
                                                           std::to_string(opts.terms) + ".csv"));
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path.string());
    write_mu_csv(f, mu);
  }
  out << "mu_{" << table.N << ",n} for n <= " << opts.terms << " -> " << path.string() << '\n';
  for (std::size_t n = 1; n <= std::min<std::size_t>(mu.size(), 4); ++n) {
    out << "  mu_" << n << " = " << mu[n].to_string(20) << '\n';
  }
  if (opts.check) {
    const BigReal defect = division_defect(delta, mu);
    out << "max convolution defect = " << defect.to_string(4) << '\n';
    if (table.est_digits && !(defect < pow10(-(*table.est_digits - 5), table.context))) {
      out << "defect exceeds 1e-" << (*table.est_digits - 5) << '\n';
      return kNumericalBreakdown;
    }
  }
  return kOk;
}

int cmd_zeros(const RunConfig& cfg, const ZerosOptions& opts, std::ostream& out) {
  EtaOptions eta_opts;
  eta_opts.max_height = opts.max_height;
  if (opts.action == "verify") {
    const auto zeros = load_zero_file(cfg.zeros_path, 1);
    int status = kOk;
    for (const auto& z : zeros) {
      const PrecisionContext ctx = PrecisionContext::from_digits(z.verified_digits + 5);
      const BigReal residual = verify_zero(z, ctx, eta_opts);
      const bool ok = residual < pow10(-(z.verified_digits - 5), ctx);
      out << std::setw(5) << z.index << "  " << to_plain_decimal(z.gamma, 20) << "  residual "
          << residual.to_string(3) << (ok ? "  ok" : "  FAIL") << '\n';
      if (!ok) status = kNumericalBreakdown;
    }
    out << zeros.size() << " zeros checked\n";
    return status;
  }
  if (opts.action == "refine") {
    if (!opts.output) throw InputError("zeros refine needs --output");
    auto zeros = load_zero_file(cfg.zeros_path, 1);
    std::vector<long> indices;
    if (opts.indices.empty()) {
      for (const auto& z : zeros) indices.push_back(z.index);
    } else {
      indices = parse_index_list(opts.indices);
    }
    RefineOptions refine;
    refine.eta = eta_opts;
    for (long k : indices) {
      if (k < 1 || static_cast<std::size_t>(k) > zeros.size()) {
        throw InputError("index " + std::to_string(k) + " not in " + cfg.zeros_path.string());
      }
      auto& z = zeros[static_cast<std::size_t>(k - 1)];
      // Extra internal digits so the printed ones are settled.
      z.gamma = refine_zero(z.gamma, cfg.digits + 5, refine);
      z.verified_digits = cfg.digits;
      z.source = "refined";
      out << "refined " << k << ": " << to_plain_decimal(z.gamma, 25) << "...\n";
    }
    if (opts.output->has_parent_path()) std::filesystem::create_directories(opts.output->parent_path());
    std::ofstream f(*opts.output);
    if (!f) throw InputError("cannot write " + opts.output->string());
    f << "# ordinates gamma_k of nontrivial zeta zeros, index = line position\n"
      << "# refined indices " << (opts.indices.empty() ? "all" : opts.indices) << " to " << cfg.digits
      << " significant digits by Newton iteration on eta\n";
    for (const auto& z : zeros) f << to_plain_decimal(z.gamma, z.verified_digits) << '\n';
    out << "wrote " << zeros.size() << " zeros -> " << opts.output->string() << '\n';
    return kOk;
  }
  throw InputError("zeros needs 'verify' or 'refine'");
}

int cmd_eval(const RunConfig& cfg, const EvalOptions& opts, std::ostream& out) {
  const PrecisionContext ctx = PrecisionContext::from_digits(cfg.digits);
  const BigComplex s = BigComplex::parse(opts.re, opts.im, ctx);
  std::optional<BigComplex> value;
  if (opts.function == "zeta") {
    value = zeta(s, ctx);
  } else if (opts.function == "eta") {
    value = eta(s, ctx);
  } else if (opts.function == "delta" || opts.function == "rational") {
    if (!opts.table) throw InputError("--fn " + opts.function + " needs --table");
    const DeltaTable table = load_delta_table(*opts.table);
    if (opts.function == "delta") {
      value = evaluate(table.series(), s);
    } else {
      const MuTable mu = dirichlet_divide(table.series(), static_cast<std::size_t>(std::max(1L, opts.terms)));
      value = rational_eval(table.series(), mu, static_cast<std::size_t>(opts.terms), s);
    }
  } else {
    throw InputError("unknown function '" + opts.function + "' (zeta, eta, delta, rational)");
  }
  out << opts.function << "(" << opts.re << " + " << opts.im << "i) = " << value->re.to_string(opts.print_digits)
      << (value->im.sign() < 0 ? " - " : " + ") << abs(value->im).to_string(opts.print_digits) << "i\n";
  out << "modulus = " << abs(*value).to_string(12) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"dzeta: finite Dirichlet series vanishing at zeta zeros"};
  app.set_version_flag("--version", DZETA_VERSION);
  app.set_config("--config", "", "key=value config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  cfg.zeros_path = default_zeros_path();
  app.add_option("--zeros-file", cfg.zeros_path, "zero ordinate file")->envname("DZETA_ZEROS_FILE")->capture_default_str();
  app.add_option("--digits", cfg.digits, "requested decimal digits")->capture_default_str();
  app.add_option("--out", cfg.output_dir, "output directory")->envname("DZETA_OUT_DIR")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads (results do not depend on it)")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("--deterministic", cfg.deterministic, "omit timestamps from metadata");

  ZerosOptions zeros_opts;
  auto* zeros_cmd = app.add_subcommand("zeros", "verify or refine a zero file");
  zeros_cmd->add_option("action", zeros_opts.action, "verify | refine")
      ->required()
      ->check(CLI::IsMember({"verify", "refine"}));
  zeros_cmd->add_option("--indices", zeros_opts.indices, "indices to refine, e.g. 1,3-5 (default all)");
  zeros_cmd->add_option("--output", zeros_opts.output, "refined zero file");
  zeros_cmd->add_option("--max-height", zeros_opts.max_height, "eta acceleration height cap");

  DeltaOptions delta_opts;
  auto* delta_cmd = app.add_subcommand("delta", "solve for delta_{N,n}");
  delta_cmd->add_option("--n", delta_opts.n, "odd N = 2M + 1");
  delta_cmd->add_flag("--ladder", delta_opts.ladder, "harvest every M <= --m-max from one elimination");
  delta_cmd->add_option("--m-max", delta_opts.m_max, "largest M for --ladder");
  delta_cmd->add_flag("!--no-estimate", delta_opts.estimate, "skip the 2x-precision accuracy companion");

  HuntOptions hunt_opts;
  auto* hunt_cmd = app.add_subcommand("hunt", "Newton search for zeros of Delta_N near targets");
  hunt_cmd->add_option("--table", hunt_opts.table, "delta CSV")->required();
  hunt_cmd->add_option("--targets", hunt_opts.targets, "rho:9-15 trivial:1-3 eta:1,2")->required();
  hunt_cmd->add_option("--max-iter", hunt_opts.max_iter, "Newton iteration cap");
  hunt_cmd->add_option("--tol-digits", hunt_opts.tol_digits, "stop when |step| < 10^-k (default D/2)");
  hunt_cmd->add_option("--report", hunt_opts.report, "CSV report path");

  LevelsOptions levels_opts;
  auto* levels_cmd = app.add_subcommand("levels", "Eratosthenes level analysis and plot data");
  levels_cmd->add_option("--table", levels_opts.table, "delta CSV")->required();
  levels_cmd->add_option("--n-max", levels_opts.n_max, "largest n (default N)");
  levels_cmd->add_option("--window", levels_opts.window, "band statistics over n <= window");
  levels_cmd->add_flag("--include-primes", levels_opts.include_primes, "count prime n in their own level");
  levels_cmd->add_option("--sublevel", levels_opts.sublevel, "also emit sublevels of d, 2d, 3d, ...");

  DivideOptions divide_opts;
  auto* divide_cmd = app.add_subcommand("divide", "formal Dirichlet division by zeta");
  divide_cmd->add_option("--table", divide_opts.table, "delta CSV")->required();
  divide_cmd->add_option("--terms", divide_opts.terms, "number of mu terms L")->required();
  divide_cmd->add_flag("--check", divide_opts.check, "verify the convolution round trip");
  divide_cmd->add_option("--output", divide_opts.output, "mu CSV path");

  EvalOptions eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate zeta, eta, Delta_N or the rational approximation");
  eval_cmd->add_option("--fn", eval_opts.function, "zeta | eta | delta | rational");
  eval_cmd->add_option("--re", eval_opts.re, "real part of s");
  eval_cmd->add_option("--im", eval_opts.im, "imaginary part of s");
  eval_cmd->add_option("--table", eval_opts.table, "delta CSV for delta/rational");
  eval_cmd->add_option("--terms", eval_opts.terms, "denominator terms L for rational");
  eval_cmd->add_option("--print-digits", eval_opts.print_digits, "digits to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*zeros_cmd) return cmd_zeros(cfg, zeros_opts, out);
    if (*delta_cmd) return cmd_delta(cfg, delta_opts, out);
    if (*hunt_cmd) return cmd_hunt(cfg, hunt_opts, out);
    if (*levels_cmd) return cmd_levels(cfg, levels_opts, out);
    if (*divide_cmd) return cmd_divide(cfg, divide_opts, out);
    if (*eval_cmd) return cmd_eval(cfg, eval_opts, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const NumericalError& e) {
    err << "numerical breakdown: " << e.what() << '\n';
    return kNumericalBreakdown;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace dzeta::cli
