#include "fracdir/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "fracdir/error.hpp"

namespace fracdir {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

void check_cell_text(const std::string& s) {
  if (s.find_first_of(",\n\r\"") != std::string::npos) {
    throw DomainError("CSV text cell contains a separator or quote: " + s);
  }
}

bool try_parse(std::string_view s, double& out) {
  try {
    out = parse_double(s);
    return true;
  } catch (const IoError&) {
    return false;
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw IoError("malformed number '" + std::string(s) + "'");
  }
  return v;
}

Table& Table::add(std::string name, std::vector<double> values) {
  Column c;
  c.name = std::move(name);
  c.values = std::move(values);
  columns.push_back(std::move(c));
  return *this;
}

Table& Table::add_text(std::string name, std::vector<std::string> labels) {
  Column c;
  c.name = std::move(name);
  c.is_text = true;
  c.labels = std::move(labels);
  columns.push_back(std::move(c));
  return *this;
}

const Column& Table::column(std::string_view name) const {
  for (const Column& c : columns) {
    if (c.name == name) return c;
  }
  throw DomainError("no column named '" + std::string(name) + "'");
}

void Table::validate() const {
  for (const Column& c : columns) {
    if (c.size() != rows()) throw DomainError("table columns have different lengths");
  }
}

void write_csv(const Table& t, std::ostream& out) {
  t.validate();
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    check_cell_text(t.columns[j].name);
    out << (j ? "," : "") << t.columns[j].name;
  }
  out << '\n';
  std::string line;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      if (j) line += ',';
      const Column& c = t.columns[j];
      if (c.is_text) {
        check_cell_text(c.labels[i]);
        line += c.labels[i];
      } else {
        line += format_double(c.values[i]);
      }
    }
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("failed writing CSV");
}

Table read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> names = split_csv_line(line);
  std::vector<std::vector<std::string>> cells(names.size());
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> row = split_csv_line(line);
    if (row.size() != names.size()) throw IoError("CSV row has the wrong number of cells");
    for (std::size_t j = 0; j < row.size(); ++j) cells[j].push_back(row[j]);
  }
  Table t;
  for (std::size_t j = 0; j < names.size(); ++j) {
    std::vector<double> values(cells[j].size());
    bool numeric = true;
    for (std::size_t i = 0; i < values.size() && numeric; ++i) {
      numeric = try_parse(cells[j][i], values[i]);
    }
    if (numeric) {
      t.add(names[j], std::move(values));
    } else {
      t.add_text(names[j], std::move(cells[j]));
    }
  }
  return t;
}

nlohmann::json law_params_json(const LawParams& p) {
  nlohmann::json j;
  j["nu"] = p.order;
  j["shapes"] = p.shapes;
  if (p.law == Law::frac_gamma) j["rate"] = p.rate;
  return j;
}

LawParams law_params_from_json(const nlohmann::json& j) {
  try {
    LawParams p;
    p.order = j.at("nu").get<double>();
    p.shapes = j.at("shapes").get<std::vector<double>>();
    if (j.contains("rate")) p.rate = j.at("rate").get<double>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed params object: ") + e.what());
  }
}

void write_json(const JsonDocument& doc, std::ostream& out) {
  doc.table.validate();
  nlohmann::ordered_json j;
  j["schema_version"] = JsonDocument::kSchemaVersion;
  if (doc.params) {
    j["law"] = to_string(doc.params->law);
    j["params"] = law_params_json(*doc.params);
  }
  if (doc.seed) j["seed"] = *doc.seed;
  nlohmann::ordered_json data;
  std::vector<std::string> names;
  for (const Column& c : doc.table.columns) names.push_back(c.name);
  data["columns"] = names;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < doc.table.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (const Column& c : doc.table.columns) {
      if (c.is_text) {
        row.push_back(c.labels[i]);
      } else if (std::isfinite(c.values[i])) {
        row.push_back(c.values[i]);
      } else {
        row.push_back(format_double(c.values[i]));
      }
    }
    rows.push_back(std::move(row));
  }
  data[doc.rows_key] = std::move(rows);
  j["data"] = std::move(data);
  for (const auto& [k, v] : doc.extra.items()) j[k] = v;
  out << j.dump(1) << '\n';
  if (!out) throw IoError("failed writing JSON");
}

JsonDocument read_json(std::istream& in) {
  JsonDocument doc;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("schema_version").get<int>() != JsonDocument::kSchemaVersion) {
      throw IoError("unsupported schema_version");
    }
    if (j.contains("law")) {
      LawParams p = law_params_from_json(j.at("params"));
      p.law = parse_law(j.at("law").get<std::string>());
      doc.params = p;
    }
    if (j.contains("seed")) doc.seed = j.at("seed").get<std::uint64_t>();
    const nlohmann::json& data = j.at("data");
    const auto names = data.at("columns").get<std::vector<std::string>>();
    doc.rows_key = data.contains("points") ? "points" : "rows";
    const nlohmann::json& rows = data.at(doc.rows_key);
    double scratch = 0;
    for (std::size_t c = 0; c < names.size(); ++c) {
      const bool text = !rows.empty() && rows[0].at(c).is_string() &&
                        !try_parse(rows[0].at(c).get<std::string>(), scratch);
      if (text) {
        std::vector<std::string> labels;
        for (const auto& r : rows) labels.push_back(r.at(c).get<std::string>());
        doc.table.add_text(names[c], std::move(labels));
      } else {
        std::vector<double> values;
        for (const auto& r : rows) {
          const auto& cell = r.at(c);
          values.push_back(cell.is_string() ? parse_double(cell.get<std::string>())
                                            : cell.get<double>());
        }
        doc.table.add(names[c], std::move(values));
      }
    }
    for (const auto& [k, v] : j.items()) {
      if (k != "schema_version" && k != "law" && k != "params" && k != "seed" && k != "data") {
        doc.extra[k] = v;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed JSON document: ") + e.what());
  }
  doc.table.validate();
  return doc;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace fracdir
