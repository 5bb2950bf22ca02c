#pragma once

// CSV and sidecar-metadata serialization for coefficient tables. Every
// coefficient is printed with enough digits to reproduce the stored value.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "dzeta/series.hpp"
#include "dzeta/solver.hpp"

namespace dzeta {

/// Ordered key=value block written next to a table as "<csv>.meta".
struct TableMetadata {
  std::map<std::string, std::string> fields;

  void set(const std::string& key, const std::string& value) { fields[key] = value; }
  std::optional<std::string> get(const std::string& key) const;
  long get_long(const std::string& key) const;  // InputError when missing or malformed
};

void write_metadata(std::ostream& out, const TableMetadata& meta);
TableMetadata read_metadata(std::istream& in, const std::string& source = "<metadata>");
std::filesystem::path metadata_path(const std::filesystem::path& csv_path);

/// Metadata describing a delta table (N, M, precision_bits, est_digits).
TableMetadata table_metadata(const DeltaTable& table);

void write_delta_csv(std::ostream& out, const DeltaTable& table);
void write_series_csv(std::ostream& out, const FiniteDirichletSeries& f);
void write_mu_csv(std::ostream& out, const MuTable& mu);

/// Parses "n,value" rows after a header; values parsed at `ctx`.
std::vector<BigReal> read_indexed_csv(std::istream& in, const PrecisionContext& ctx,
                                      const std::string& source = "<csv>");

/// Writes <path> and <path>.meta. Extra metadata fields are merged in.
void save_delta_table(const std::filesystem::path& path, const DeltaTable& table, const TableMetadata& extra = {});

/// Loads a table written by save_delta_table; the sidecar supplies N, M, the
/// precision and the accuracy estimate.
DeltaTable load_delta_table(const std::filesystem::path& path, TableMetadata* meta_out = nullptr);

}  // namespace dzeta
