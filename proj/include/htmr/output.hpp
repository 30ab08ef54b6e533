#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "htmr/error.hpp"

namespace htmr {

inline constexpr const char* kToolName = "htmr-lab";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kVoterSemantics = "voter-passthrough";

/// Empty, real, integer or text.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct DocumentMetadata {
  std::string command;
  std::uint64_t seed = 1;
  std::string semantics = kVoterSemantics;
  std::vector<std::pair<std::string, std::string>> config;  // echoed as key=value
};

/// Reproducibility header plus a table. Serialising the same document always
/// yields the same bytes.
struct OutputDocument {
  DocumentMetadata metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw ConfigError("row width does not match column count");
    rows.push_back(std::move(row));
  }
};

enum class OutputFormat : std::uint8_t { Csv, Json };

[[nodiscard]] inline OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ConfigError("unknown format '" + text + "' (expected csv or json)");
}

/// 12 significant digits; infinities print as inf / -inf.
[[nodiscard]] inline std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

[[nodiscard]] inline std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

[[nodiscard]] inline std::string header_line(const DocumentMetadata& m) {
  std::string line = std::string("# ") + kToolName + " v" + kToolVersion + " seed=" + std::to_string(m.seed) +
                     " semantics=" + m.semantics + " command=" + m.command;
  for (const auto& [key, value] : m.config) line += " " + key + "=" + value;
  return line;
}

inline void write_csv(std::ostream& os, const OutputDocument& doc) {
  os << header_line(doc.metadata) << '\n';
  for (std::size_t i = 0; i < doc.columns.size(); ++i) os << (i ? "," : "") << doc.columns[i];
  os << '\n';
  for (const auto& row : doc.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const OutputDocument& doc) {
  using nlohmann::ordered_json;
  ordered_json meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["seed"] = doc.metadata.seed;
  meta["semantics"] = doc.metadata.semantics;
  meta["command"] = doc.metadata.command;
  ordered_json config = ordered_json::object();
  for (const auto& [key, value] : doc.metadata.config) config[key] = value;
  meta["config"] = std::move(config);

  ordered_json rows = ordered_json::array();
  for (const auto& row : doc.rows) {
    ordered_json r = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (std::holds_alternative<std::monostate>(c)) {
        r[doc.columns[i]] = nullptr;
      } else if (const double* d = std::get_if<double>(&c)) {
        // Same 12 significant digits as CSV. JSON has no infinity; keep the
        // CSV spelling for it.
        if (std::isfinite(*d)) {
          r[doc.columns[i]] = std::stod(format_real(*d));
        } else {
          r[doc.columns[i]] = format_real(*d);
        }
      } else if (const std::int64_t* n = std::get_if<std::int64_t>(&c)) {
        r[doc.columns[i]] = *n;
      } else {
        r[doc.columns[i]] = std::get<std::string>(c);
      }
    }
    rows.push_back(std::move(r));
  }

  ordered_json out;
  out["metadata"] = std::move(meta);
  out["columns"] = doc.columns;
  out["rows"] = std::move(rows);
  return out;
}

inline void write_document(std::ostream& os, const OutputDocument& doc, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    write_csv(os, doc);
  } else {
    os << to_json(doc).dump(2) << '\n';
  }
}

[[nodiscard]] inline std::string render(const OutputDocument& doc, OutputFormat format = OutputFormat::Csv) {
  std::ostringstream os;
  write_document(os, doc, format);
  return os.str();
}

}  // namespace htmr
