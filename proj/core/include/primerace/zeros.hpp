#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "primerace/chars.hpp"

namespace primerace {

enum class ZeroProvenance { computed, imported };

/// Ordered positive ordinates of critical-line zeros of L(s, chi_D) up to a
/// completeness height.
struct ZeroList {
  std::int64_t discriminant = 0;
  double height = 0.0;
  double precision = 1e-10;
  std::vector<double> zeros;
  bool verified = false;
  ZeroProvenance provenance = ZeroProvenance::computed;
  std::string source;  // path for imported lists

  Character character() const { return Character(discriminant, discriminant < 0 ? -discriminant : discriminant); }
  std::string label() const { return "chi_" + std::to_string(discriminant); }

  /// Same list restricted to gamma <= new_height (new_height <= height).
  ZeroList truncated(double new_height) const;
  std::size_t count_up_to(double t) const;
};

struct ZeroScanOptions {
  double step = 0.05;
  double tolerance = 1e-10;   // bracket width for each zero
  unsigned workers = 1;
  std::size_t chunk_points = 4000;
  double count_slack = 2.0;   // allowed |N(T) - theta(T)/pi|
};

/// Sign-change scan of completed_real over (0, T] followed by bracketed root
/// refinement. Throws MissedZeroError when the zero count disagrees with the
/// counting function by more than count_slack.
ZeroList find_zeros(const Character& chi, double height, const ZeroScanOptions& options = {});

/// |completed_real(chi, gamma)| below which a stored zero is accepted outright.
inline constexpr double kZeroVerificationTolerance = 1e-8;

/// Re-checks every zero (value below tolerance or a sign change within the
/// stated precision), ordering, range and the count. Throws VerificationError.
void verify_zeros(ZeroList& list, double count_slack = 2.0);

void export_zeros(const ZeroList& list, const std::filesystem::path& path);
void write_zeros(const ZeroList& list, std::ostream& out);

/// Parses a zero-list file. Unless trust is set the zeros are re-verified.
ZeroList import_zeros(const std::filesystem::path& path, bool trust = false);
ZeroList read_zeros(std::istream& in, const std::string& source_name);

/// Canonical file name inside a zeros directory: "chi_-4.zeros".
std::filesystem::path zero_file_name(std::int64_t discriminant);

/// Zero lists keyed by discriminant, typically loaded from a directory.
class ZeroCatalog {
 public:
  ZeroCatalog() = default;

  void add(ZeroList list);
  bool contains(std::int64_t discriminant) const { return lists_.count(discriminant) != 0; }
  /// Throws DomainError naming the missing character.
  const ZeroList& at(std::int64_t discriminant) const;
  const std::map<std::int64_t, ZeroList>& lists() const noexcept { return lists_; }

  /// Loads chi_<D>.zeros for each requested discriminant. Missing files raise
  /// DomainError with the command that would produce them.
  static ZeroCatalog load(const std::filesystem::path& dir, const std::vector<std::int64_t>& discriminants,
                          bool trust = false);

 private:
  std::map<std::int64_t, ZeroList> lists_;
};

}  // namespace primerace
