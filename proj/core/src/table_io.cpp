#include "dzeta/table_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace dzeta {

std::optional<std::string> TableMetadata::get(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) return std::nullopt;
  return it->second;
}

long TableMetadata::get_long(const std::string& key) const {
  auto v = get(key);
  if (!v) throw InputError("metadata field '" + key + "' missing");
  try {
    std::size_t used = 0;
    long out = std::stol(*v, &used);
    if (used != v->size()) throw std::invalid_argument(key);
    return out;
  } catch (const std::logic_error&) {
    throw InputError("metadata field '" + key + "' is not an integer: " + *v);
  }
}

void write_metadata(std::ostream& out, const TableMetadata& meta) {
  for (const auto& [k, v] : meta.fields) out << k << '=' << v << '\n';
}

TableMetadata read_metadata(std::istream& in, const std::string& source) {
  TableMetadata meta;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InputError(source + ":" + std::to_string(line_no) + ": expected key=value");
    }
    meta.fields[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

std::filesystem::path metadata_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".meta");
}

TableMetadata table_metadata(const DeltaTable& table) {
  TableMetadata meta;
  meta.set("N", std::to_string(table.N));
  meta.set("M", std::to_string(table.M));
  meta.set("precision_bits", std::to_string(table.context.bits()));
  meta.set("est_digits", table.est_digits ? std::to_string(*table.est_digits) : "none");
  return meta;
}

namespace {

void write_rows(std::ostream& out, const char* header, const std::vector<BigReal>& values) {
  out << header << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) out << (i + 1) << ',' << values[i].to_string() << '\n';
}

}  // namespace

void write_delta_csv(std::ostream& out, const DeltaTable& table) { write_rows(out, "n,delta", table.coeffs); }

void write_series_csv(std::ostream& out, const FiniteDirichletSeries& f) {
  write_rows(out, "n,coefficient", f.coeffs);
}

void write_mu_csv(std::ostream& out, const MuTable& mu) { write_rows(out, "n,mu", mu.mu); }

std::vector<BigReal> read_indexed_csv(std::istream& in, const PrecisionContext& ctx, const std::string& source) {
  std::vector<BigReal> values;
  std::string line;
  long line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const std::string where = source + ":" + std::to_string(line_no);
    auto comma = line.find(',');
    if (comma == std::string::npos) throw InputError(where + ": expected 'n,value'");
    long n = 0;
    try {
      n = std::stol(line.substr(0, comma));
    } catch (const std::logic_error&) {
      throw InputError(where + ": bad index");
    }
    if (n != static_cast<long>(values.size()) + 1) throw InputError(where + ": indices must run 1, 2, 3, ...");
    try {
      values.push_back(BigReal::parse(line.substr(comma + 1), ctx));
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return values;
}

void save_delta_table(const std::filesystem::path& path, const DeltaTable& table, const TableMetadata& extra) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    write_delta_csv(out, table);
    if (!out) throw InputError("I/O failure writing " + path.string());
  }
  TableMetadata meta = extra;
  for (const auto& [k, v] : table_metadata(table).fields) meta.fields[k] = v;
  std::ofstream out(metadata_path(path));
  if (!out) throw InputError("cannot write " + metadata_path(path).string());
  write_metadata(out, meta);
}

DeltaTable load_delta_table(const std::filesystem::path& path, TableMetadata* meta_out) {
  std::ifstream meta_in(metadata_path(path));
  if (!meta_in) throw InputError("missing metadata sidecar " + metadata_path(path).string());
  TableMetadata meta = read_metadata(meta_in, metadata_path(path).string());
  const PrecisionContext ctx(meta.get_long("precision_bits"));
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  DeltaTable table{static_cast<int>(meta.get_long("N")), static_cast<int>(meta.get_long("M")), {}, ctx,
                   std::nullopt};
  table.coeffs = read_indexed_csv(in, ctx, path.string());
  if (static_cast<long>(table.coeffs.size()) != table.N || table.N != 2 * table.M + 1) {
    throw InputError(path.string() + ": row count does not match N = " + std::to_string(table.N));
  }
  if (!(table.coeffs[0] == 1)) throw InputError(path.string() + ": delta_1 must be exactly 1");
  if (auto est = meta.get("est_digits"); est && *est != "none") table.est_digits = meta.get_long("est_digits");
  if (meta_out) *meta_out = meta;
  return table;
}

}  // namespace dzeta
