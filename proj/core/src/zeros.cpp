#include "dzeta/zeros.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

namespace dzeta {

long count_significant_digits(std::string_view number) {
  auto e = number.find_first_of("eE");
  std::string_view mantissa = number.substr(0, e);
  long count = 0;
  bool leading = true;
  for (char c : mantissa) {
    if (!std::isdigit(static_cast<unsigned char>(c))) continue;
    if (leading && c == '0') continue;
    leading = false;
    ++count;
  }
  return count;
}

std::vector<ZetaZero> parse_zero_file(std::istream& in, long min_digits, const std::string& source) {
  std::vector<ZetaZero> zeros;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    const std::string text = line.substr(first, last - first + 1);
    const std::string where = source + ":" + std::to_string(line_no);
    const long digits = count_significant_digits(text);
    if (digits == 0) throw InputError(where + ": malformed ordinate '" + text + "'");
    if (digits < min_digits) {
      throw InputError(where + ": ordinate has " + std::to_string(digits) + " digits, need " +
                       std::to_string(min_digits));
    }
    const PrecisionContext ctx = PrecisionContext::from_digits(std::max(digits, 20L) + 5);
    BigReal gamma(ctx);
    try {
      gamma = BigReal::parse(text, ctx);
    } catch (const InputError& err) {
      throw InputError(where + ": malformed ordinate (" + err.what() + ")");
    }
    if (gamma.sign() <= 0) throw InputError(where + ": ordinate must be positive");
    if (!zeros.empty() && !(gamma > zeros.back().gamma)) {
      throw InputError(where + ": ordinates must be strictly increasing");
    }
    zeros.push_back(ZetaZero{static_cast<int>(zeros.size()) + 1, std::move(gamma), digits, source});
  }
  return zeros;
}

std::vector<ZetaZero> load_zero_file(const std::filesystem::path& path, long min_digits) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open zero file " + path.string());
  return parse_zero_file(in, min_digits, path.string());
}

std::string to_plain_decimal(const BigReal& x, long digits) {
  if (x.is_zero()) return "0";
  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(digits), x.raw(), MPFR_RNDN);
  std::string d(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (d[0] == '-') {
    sign = "-";
    d.erase(0, 1);
  }
  if (e <= 0) return sign + "0." + std::string(static_cast<std::size_t>(-e), '0') + d;
  const auto point = static_cast<std::size_t>(e);
  if (point >= d.size()) return sign + d + std::string(point - d.size(), '0');
  return sign + d.substr(0, point) + "." + d.substr(point);
}

void write_zero_file(std::ostream& out, const std::vector<ZetaZero>& zeros, long digits,
                     const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  for (const auto& z : zeros) out << to_plain_decimal(z.gamma, digits) << '\n';
}

BigReal verify_zero(const ZetaZero& z, const PrecisionContext& ctx, const EtaOptions& opts) {
  if (ctx.decimal_digits() < z.verified_digits) {
    throw InputError("verify_zero: context carries " + std::to_string(ctx.decimal_digits()) +
                     " digits but zero " + std::to_string(z.index) + " claims " +
                     std::to_string(z.verified_digits));
  }
  BigComplex s(BigReal::ratio(1, 2, ctx), z.gamma.rounded_to(ctx));
  return abs(eta(s, ctx, opts));
}

BigReal refine_zero(const BigReal& gamma0, long target_digits, const RefineOptions& opts) {
  if (target_digits < 1) throw InputError("refine_zero: target digits must be positive");
  std::vector<long> stages;
  for (long d = 30; d < target_digits + 10; d *= 2) stages.push_back(d);
  stages.push_back(target_digits + 10);

  const PrecisionContext seed_ctx = PrecisionContext::from_digits(stages.back() + 10);
  const BigComplex seed(BigReal::ratio(1, 2, seed_ctx), gamma0.rounded_to(seed_ctx));
  BigComplex s = seed;
  int iterations = 0;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const bool last = i + 1 == stages.size();
    const PrecisionContext ctx = PrecisionContext::from_digits(stages[i] + 10);
    s = s.rounded_to(ctx);
    const BigComplex anchor = seed.rounded_to(ctx);
    const BigReal window = BigReal::parse(std::to_string(opts.window), ctx);
    const BigReal threshold = pow10(last ? -target_digits : -(stages[i] / 2), ctx);
    while (true) {
      if (iterations++ >= opts.max_iterations) {
        throw ConvergenceError("refine_zero: no convergence from gamma0 = " + gamma0.to_string(20));
      }
      auto [value, derivative] = eta_with_derivative(s, ctx, opts.eta);
      if (derivative.re.is_zero() && derivative.im.is_zero()) {
        throw ConvergenceError("refine_zero: stationary point of eta");
      }
      const BigComplex step = value / derivative;
      s -= step;
      if (abs(s - anchor) > window) {
        throw ConvergenceError("refine_zero: iterate left the search window around gamma0 = " +
                               gamma0.to_string(20));
      }
      if (abs(step) < threshold) break;
    }
  }
  const PrecisionContext ctx = s.context();
  if (abs(s.re - BigReal::ratio(1, 2, ctx)) > pow10(-(target_digits - 2), ctx)) {
    throw ConvergenceError("refine_zero: real part drifted away from 1/2 (" + s.re.to_string(12) + ")");
  }
  return s.im;
}

}  // namespace dzeta
