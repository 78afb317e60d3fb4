#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace racelab {

enum class OutputFormat { csv, json };

/// Settings shared by all subcommands. A key=value file supplies values that
/// flags then override.
struct RunConfig {
  std::filesystem::path zeros_dir = "zeros";
  double height = 2000.0;
  std::uint64_t samples = 10'000'000;
  std::optional<std::uint64_t> seed;
  OutputFormat format = OutputFormat::csv;
  unsigned workers = 1;

  /// Throws ConfigError when a budget is not positive.
  void validate() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys are errors.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
void apply_config(RunConfig& config, const std::map<std::string, std::string>& values);

/// Accepts plain integers and exact scientific forms such as 1e7.
std::uint64_t parse_count(const std::string& text);
OutputFormat parse_format(const std::string& text);
std::string to_string(OutputFormat f);

}  // namespace racelab
