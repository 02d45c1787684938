#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "fracdir/sampling.hpp"

namespace fracdir {

/// 17 significant digits, shortest exponent form, locale independent.
/// Non-finite values are written as nan, inf, -inf.
std::string format_double(double v);
/// Inverse of format_double; throws IoError on malformed input.
double parse_double(std::string_view s);

/// Column-oriented table; each column is either numeric or text.
struct Column {
  std::string name;
  bool is_text = false;
  std::vector<double> values;
  std::vector<std::string> labels;

  std::size_t size() const { return is_text ? labels.size() : values.size(); }
};

struct Table {
  std::vector<Column> columns;

  Table& add(std::string name, std::vector<double> values);
  Table& add_text(std::string name, std::vector<std::string> labels);
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Throws DomainError for an unknown name.
  const Column& column(std::string_view name) const;
  /// Throws DomainError when column lengths differ.
  void validate() const;
};

/// Header row of column names, then one comma-separated row per record.
void write_csv(const Table& t, std::ostream& out);
/// A column is numeric when every cell parses as a number.
Table read_csv(std::istream& in);

/// Envelope {schema_version, law, params: {nu, shapes, rate?}, seed, data,
/// ...extra}. data holds {columns: [...], <rows_key>: [[...], ...]}.
struct JsonDocument {
  static constexpr int kSchemaVersion = 1;

  std::optional<LawParams> params;
  std::optional<std::uint64_t> seed;
  Table table;
  std::string rows_key = "rows";
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json law_params_json(const LawParams& p);
LawParams law_params_from_json(const nlohmann::json& j);

void write_json(const JsonDocument& doc, std::ostream& out);
JsonDocument read_json(std::istream& in);

// File helpers; failures raise IoError.

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace fracdir
