#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "primerace/sieve.hpp"
#include "primerace/zeros.hpp"
#include "racelab/config.hpp"
#include "racelab/report.hpp"

namespace racelab {

/// Per-invocation state handed to every subcommand.
struct Session {
  RunConfig config;
  std::ostream& out;
  std::ostream& err;
  std::optional<std::filesystem::path> report_path;

  void emit(const Meta& meta, const Table& table) const;
  /// Adds the shared settings to meta (zeros dir, height, workers, format).
  void common_params(Meta& meta) const;
  primerace::ZeroCatalog catalog(const std::vector<std::int64_t>& discriminants) const;
  std::uint64_t require_seed(const char* command) const;
  primerace::SieveOptions sieve() const;
};

std::vector<std::int64_t> parse_residues(const std::string& text);
std::string join_residues(const std::vector<std::int64_t>& residues, const char* sep = ",");

enum class ReproduceTarget { table1, table2, two_way, three_way, crossings };

/// Returns kSuccess when every row passes, kComputationFailure otherwise.
int reproduce(const Session& session, ReproduceTarget target, bool extreme);

}  // namespace racelab
