#include "racelab/report.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

namespace racelab {

namespace {

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {};
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_real(v);
        } else {
          return std::to_string(v);
        }
      },
      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      c);
}

}  // namespace

ZeroSource describe_zeros(const primerace::ZeroList& list) {
  return {list.label(), list.provenance == primerace::ZeroProvenance::imported ? "imported" : "computed", list.height,
          list.zeros.size()};
}

void Meta::param(std::string key, double value) { param(std::move(key), format_real(value)); }

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const Meta& meta, const Table& table) {
  out << "# tool=racelab " << kToolVersion << '\n';
  out << "# command=" << meta.command << '\n';
  for (const auto& [k, v] : meta.params) out << "# param." << k << '=' << v << '\n';
  out << "# seed=" << (meta.seed ? std::to_string(*meta.seed) : "none") << '\n';
  for (const auto& z : meta.zeros) {
    out << "# zeros." << z.label << '=' << z.provenance << " T=" << format_real(z.height) << " n=" << z.count << '\n';
  }
  for (const auto& n : meta.notes) out << "# note=" << n << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_quote(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_quote(cell_text(row[i]));
    out << '\n';
  }
}

void write_json(std::ostream& out, const Meta& meta, const Table& table) {
  nlohmann::ordered_json doc;
  auto& m = doc["meta"];
  m["tool"] = "racelab";
  m["version"] = kToolVersion;
  m["command"] = meta.command;
  m["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta.params) m["params"][k] = v;
  m["seed"] = meta.seed ? nlohmann::ordered_json(*meta.seed) : nlohmann::ordered_json(nullptr);
  m["zeros"] = nlohmann::ordered_json::array();
  for (const auto& z : meta.zeros) {
    m["zeros"].push_back({{"character", z.label}, {"provenance", z.provenance}, {"height", z.height}, {"count", z.count}});
  }
  if (!meta.notes.empty()) m["notes"] = meta.notes;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) r[table.columns[i]] = cell_json(row[i]);
    doc["rows"].push_back(std::move(r));
  }
  out << doc.dump(2) << '\n';
}

void write_report(std::ostream& out, OutputFormat format, const Meta& meta, const Table& table) {
  if (format == OutputFormat::json) {
    write_json(out, meta, table);
  } else {
    write_csv(out, meta, table);
  }
}

}  // namespace racelab
