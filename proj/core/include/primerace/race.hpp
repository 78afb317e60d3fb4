#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "primerace/chars.hpp"
#include "primerace/sieve.hpp"
#include "primerace/zeros.hpp"

namespace primerace {

/// Where a RaceSnapshotTable records its rows.
class CheckpointRule {
 public:
  enum class Kind { log_per_decade, linear, explicit_list };

  static CheckpointRule log_per_decade(unsigned per_decade);
  static CheckpointRule linear(std::uint64_t step);
  static CheckpointRule list(std::vector<std::uint64_t> points);
  /// "log:100", "linear:1000" or "list:10,100,1000".
  static CheckpointRule parse(std::string_view text);

  /// Sorted, deduplicated checkpoints in [2, limit]; always includes limit.
  std::vector<std::uint64_t> generate(std::uint64_t limit) const;
  Kind kind() const noexcept { return kind_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::log_per_decade;
  std::uint64_t parameter_ = 10;
  std::vector<std::uint64_t> points_;
};

/// pi(x;q,a), theta(x;q,a) and psi(x;q,a) at checkpoints, for the reduced residues a.
class RaceSnapshotTable {
 public:
  RaceSnapshotTable(std::int64_t q, std::vector<std::uint64_t> checkpoints);

  std::int64_t q() const noexcept { return q_; }
  const std::vector<std::int64_t>& residues() const noexcept { return residues_; }
  const std::vector<std::uint64_t>& checkpoints() const noexcept { return checkpoints_; }

  /// Row index of checkpoint x; throws DomainError if x is not a checkpoint.
  std::size_t row(std::uint64_t x) const;
  std::size_t column(std::int64_t a) const;

  std::uint64_t pi(std::uint64_t x, std::int64_t a) const { return counts_[cell(row(x), column(a))]; }
  double theta(std::uint64_t x, std::int64_t a) const { return theta_[cell(row(x), column(a))]; }
  double psi(std::uint64_t x, std::int64_t a) const { return psi_[cell(row(x), column(a))]; }
  std::uint64_t pi_total(std::uint64_t x) const { return pi_total_[row(x)]; }
  /// Number of primes dividing q that are <= x.
  std::uint64_t pi_divisors(std::uint64_t x) const { return pi_divisors_[row(x)]; }

  // Row-level access used while filling the table.
  std::uint64_t& count_at(std::size_t r, std::size_t c) { return counts_[cell(r, c)]; }
  double& theta_at(std::size_t r, std::size_t c) { return theta_[cell(r, c)]; }
  double& psi_at(std::size_t r, std::size_t c) { return psi_[cell(r, c)]; }
  std::uint64_t& pi_total_at(std::size_t r) { return pi_total_[r]; }
  std::uint64_t& pi_divisors_at(std::size_t r) { return pi_divisors_[r]; }

 private:
  std::size_t cell(std::size_t r, std::size_t c) const noexcept { return r * residues_.size() + c; }

  std::int64_t q_;
  std::vector<std::int64_t> residues_;
  std::vector<int> column_of_;
  std::vector<std::uint64_t> checkpoints_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> theta_;
  std::vector<double> psi_;
  std::vector<std::uint64_t> pi_total_;
  std::vector<std::uint64_t> pi_divisors_;
};

/// Sieves to limit and fills the table. theta sums log p over primes, psi
/// adds log p at every prime power p^r <= x with p^r = a mod q.
RaceSnapshotTable race_counts(std::int64_t q, std::uint64_t limit, const CheckpointRule& rule,
                              const SieveOptions& sieve = {});

/// Distinct values x, floor(x^(1/2)), floor(x^(1/3)), ... while >= 2.
std::vector<std::uint64_t> prime_power_checkpoints(std::uint64_t x);

/// Relative residual of theta(x;q,a) = psi(x;q,a) - sum_{k>=2} sum_{c^k = a} theta(x^(1/k);q,c).
/// The table must hold every checkpoint in prime_power_checkpoints(x).
double prime_power_residual(std::uint64_t x, std::int64_t q, std::int64_t a, const RaceSnapshotTable& table);

/// Residues c mod q with c^k = a mod q.
std::vector<std::int64_t> kth_roots(std::int64_t q, std::int64_t a, unsigned k);

/// (log x / sqrt x) (phi(q) pi(x;q,a) - pi(x)).
double error_term(std::uint64_t x, std::int64_t q, std::int64_t a, const RaceSnapshotTable& table);

/// 2 sum_{0 < gamma <= T} Re(x^{i gamma} / (1/2 + i gamma)).
double truncated_e_chi(double x, const ZeroList& zeros);

/// E(x;q,a) + c(q,a) + sum_chi chi(a) E_T(x, chi), using one zero list per
/// nonprincipal character (truncated at `height`).
double reconstruction_residual(std::uint64_t x, std::int64_t q, std::int64_t a, const RaceSnapshotTable& table,
                               const ZeroCatalog& zeros, double height);

struct CrossingEvent {
  std::uint64_t x = 0;
  int direction = 0;  // +1: a takes the strict lead, -1: b takes it
};

/// Changes of strict leader between pi(x;q,a) and pi(x;q,b). Ties do not end a
/// lead; the next strict lead for the other side does.
struct CrossingRecord {
  std::int64_t q = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::uint64_t limit = 0;
  std::vector<CrossingEvent> events;
};

CrossingRecord crossings(std::int64_t q, std::int64_t a, std::int64_t b, std::uint64_t limit,
                         const SieveOptions& sieve = {});

/// Least x <= limit with pi(x;q,a) > pi(x;q,b).
std::optional<std::uint64_t> first_crossing(std::int64_t q, std::int64_t a, std::int64_t b, std::uint64_t limit,
                                            const SieveOptions& sieve = {});

struct LogDensity {
  double value = 0.0;    // weighted measure of the strict ordering
  double ties = 0.0;     // weighted measure where two listed counts coincide
  double measure = 0.0;  // (log X)^(k+1), the weight of [1, X]

  /// Share of the ordering among the t where no two listed counts are equal.
  /// Ties have limiting density zero, so this estimates the same limit
  /// without the early tie intervals that dominate the strict value at small X.
  double tie_free() const noexcept { return ties < 1.0 ? value / (1.0 - ties) : 0.0; }
};

/// Weighted measure of {1 <= t <= X : pi(t;q,a1) > ... > pi(t;q,ar)} with
/// weight (k+1)(log t)^k / (t (log X)^(k+1)). Exact: the ordering is constant
/// between primes and the weight has a closed-form antiderivative. The
/// strict set, its ties and the remaining orderings sum to 1. Requires k > -1.
LogDensity log_density(std::int64_t q, std::span<const std::int64_t> ordering, std::uint64_t limit, double k = 0.0,
                       const SieveOptions& sieve = {});

struct GapRecord {
  std::uint64_t x = 0;
  std::uint64_t gap = 0;      // max pairwise |pi(x;q,ai) - pi(x;q,aj)|
  double normalized = 0.0;    // gap / (sqrt x / log x)
};

struct GapTrace {
  std::int64_t q = 0;
  std::vector<std::int64_t> residues;
  std::uint64_t limit = 0;
  std::vector<GapRecord> raw_minima;         // x where the running minimum of the gap drops
  std::vector<GapRecord> normalized_minima;  // x where the running minimum of the normalised gap drops
  std::vector<std::uint64_t> ties;           // primes after which all counts coincide (first max_ties)
  std::uint64_t tie_count = 0;
};

GapTrace gap_trace(std::int64_t q, std::span<const std::int64_t> residues, std::uint64_t limit,
                   std::size_t max_ties = 100000, const SieveOptions& sieve = {});

/// Least x at which pi(x;q,a) strictly exceeds at least (rivals + 1 - rank) of
/// the rivals, i.e. holds rank `rank` or better with no tie for that place.
std::optional<std::uint64_t> first_rank_reached(std::int64_t q, std::int64_t a, std::span<const std::int64_t> rivals,
                                                unsigned rank, std::uint64_t limit, const SieveOptions& sieve = {});

}  // namespace primerace
