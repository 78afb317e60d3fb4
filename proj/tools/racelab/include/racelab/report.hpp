#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "primerace/zeros.hpp"
#include "racelab/config.hpp"

namespace racelab {

inline constexpr const char* kToolVersion = "0.3.0";

/// std::monostate renders as an empty CSV field and JSON null.
using Cell = std::variant<std::monostate, std::string, std::int64_t, std::uint64_t, double, bool>;

struct ZeroSource {
  std::string label;
  std::string provenance;  // computed | imported
  double height = 0.0;
  std::size_t count = 0;
};

ZeroSource describe_zeros(const primerace::ZeroList& list);

/// Everything needed to regenerate an output: command, parameters, seed and zero data.
struct Meta {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::optional<std::uint64_t> seed;
  std::vector<ZeroSource> zeros;
  std::vector<std::string> notes;

  void param(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }
  void param(std::string key, double value);
  void param(std::string key, std::int64_t value) { param(std::move(key), std::to_string(value)); }
  void param(std::string key, std::uint64_t value) { param(std::move(key), std::to_string(value)); }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Shortest round-tripping decimal form.
std::string format_real(double v);
std::string csv_quote(const std::string& field);

/// CSV: '#' metadata lines, a header and RFC 4180 quoted rows.
void write_csv(std::ostream& out, const Meta& meta, const Table& table);
/// JSON: one object with "meta", "columns" and "rows" (one object per row).
void write_json(std::ostream& out, const Meta& meta, const Table& table);
void write_report(std::ostream& out, OutputFormat format, const Meta& meta, const Table& table);

}  // namespace racelab
