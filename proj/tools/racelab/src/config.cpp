#include "racelab/config.hpp"

#include <cmath>
#include <fstream>

namespace racelab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) throw ConfigError(key + ": expected a number, got '" + text + "'");
  return v;
}

}  // namespace

void RunConfig::validate() const {
  if (!(height > 0.0)) throw ConfigError("height must be positive");
  if (samples == 0) throw ConfigError("samples must be positive");
  if (workers == 0) throw ConfigError("workers must be positive");
}

std::uint64_t parse_count(const std::string& text) {
  const double v = parse_real("count", trim(text));
  if (v < 0.0 || v != std::floor(v) || v > 1.8e19) {
    throw ConfigError("expected a nonnegative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("format must be csv or json, got '" + text + "'");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_config(RunConfig& config, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    if (key == "zeros_dir") {
      config.zeros_dir = value;
    } else if (key == "height") {
      config.height = parse_real(key, value);
    } else if (key == "samples") {
      config.samples = parse_count(value);
    } else if (key == "seed") {
      config.seed = parse_count(value);
    } else if (key == "format") {
      config.format = parse_format(value);
    } else if (key == "workers") {
      config.workers = static_cast<unsigned>(parse_count(value));
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

}  // namespace racelab
