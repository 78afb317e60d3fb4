#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>

#include "primerace/errors.hpp"
#include "primerace/race.hpp"
#include "primerace/sieve.hpp"

using namespace primerace;

namespace {

// Plain trial-division tables used as the oracle for the sieve-driven code.
struct NaiveCounts {
  std::map<std::int64_t, std::uint64_t> pi;
  std::map<std::int64_t, double> theta;
  std::map<std::int64_t, double> psi;
  std::uint64_t pi_total = 0;
};

bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// p if n = p^r, else 0.
std::uint64_t prime_base(std::uint64_t n) {
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    return n == 1 ? p : 0;
  }
  return 0;
}

NaiveCounts naive_counts(std::int64_t q, std::uint64_t x) {
  NaiveCounts c;
  for (std::uint64_t n = 2; n <= x; ++n) {
    const std::uint64_t p = prime_base(n);
    if (p == 0) continue;
    const auto a = static_cast<std::int64_t>(n % static_cast<std::uint64_t>(q));
    if (n == p) {
      ++c.pi_total;
      if (std::gcd(a, q) == 1) {
        ++c.pi[a];
        c.theta[a] += std::log(static_cast<double>(p));
      }
    }
    if (std::gcd(a, q) == 1) c.psi[a] += std::log(static_cast<double>(p));
  }
  return c;
}

// Per-integer scan: counts are constant on [n, n+1), whose weight under
// (k+1)(log t)^k/t dt is taken by Simpson's rule in u = log t.
struct NaiveDensity {
  double strict = 0.0;
  double ties = 0.0;
};

NaiveDensity naive_log_density(std::int64_t q, const std::vector<std::int64_t>& order, std::uint64_t x, double k) {
  std::map<std::int64_t, std::uint64_t> pi;
  NaiveDensity d;
  const auto weight = [k](double lo, double hi) {
    const double a = std::log(lo), b = std::log(hi);
    const int m = 16;
    double s = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double u = a + (b - a) * i / m;
      const double f = (k + 1.0) * std::pow(u, k);
      s += f * (i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return s * (b - a) / (3.0 * m);
  };
  for (std::uint64_t n = 1; n < x; ++n) {
    if (is_prime_trial(n)) ++pi[static_cast<std::int64_t>(n % static_cast<std::uint64_t>(q))];
    bool strict = true, tie = false;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) strict = strict && pi[order[i]] > pi[order[i + 1]];
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j) tie = tie || pi[order[i]] == pi[order[j]];
    const double w = weight(static_cast<double>(n), static_cast<double>(n + 1));
    if (strict) d.strict += w;
    if (tie) d.ties += w;
  }
  const double total = std::pow(std::log(static_cast<double>(x)), k + 1.0);
  d.strict /= total;
  d.ties /= total;
  return d;
}

ZeroList oracle_chi_m4() {
  return import_zeros(std::filesystem::path(PRIMERACE_TEST_DATA) / "chi_-4_T1000_mpmath.zeros", true);
}

}  // namespace

TEST(Checkpoints, Rules) {
  EXPECT_EQ(CheckpointRule::parse("log:2").generate(1000), (std::vector<std::uint64_t>{3, 10, 31, 100, 316, 1000}));
  EXPECT_EQ(CheckpointRule::parse("linear:250").generate(1100),
            (std::vector<std::uint64_t>{250, 500, 750, 1000, 1100}));
  EXPECT_EQ(CheckpointRule::parse("list:10,5,10,5000").generate(1000), (std::vector<std::uint64_t>{5, 10, 1000}));
  EXPECT_EQ(CheckpointRule::parse("log:3").describe(), "log:3");
  EXPECT_THROW(CheckpointRule::parse("log:0"), DomainError);
  EXPECT_THROW(CheckpointRule::parse("cubic:3"), DomainError);
  EXPECT_THROW(CheckpointRule::parse("linear:x"), DomainError);
  EXPECT_THROW(CheckpointRule::parse("100"), DomainError);
}

TEST(RaceCounts, MatchTrialDivision) {
  for (std::int64_t q : {3, 4, 8, 12, 10}) {
    const auto table = race_counts(q, 5000, CheckpointRule::linear(397));
    for (const auto x : table.checkpoints()) {
      NaiveCounts oracle = naive_counts(q, x);
      EXPECT_EQ(table.pi_total(x), oracle.pi_total);
      for (const auto a : table.residues()) {
        EXPECT_EQ(table.pi(x, a), oracle.pi[a]) << q << " " << a << " " << x;
        EXPECT_NEAR(table.theta(x, a), oracle.theta[a], 1e-9);
        EXPECT_NEAR(table.psi(x, a), oracle.psi[a], 1e-9);
      }
    }
  }
}

TEST(RaceCounts, PrimesDividingTheModulusAreCountedSeparately) {
  const auto table = race_counts(12, 100, CheckpointRule::list({2, 3, 100}));
  EXPECT_EQ(table.pi_divisors(2), 1u);
  EXPECT_EQ(table.pi_divisors(100), 2u);
  std::uint64_t sum = table.pi_divisors(100);
  for (auto a : table.residues()) sum += table.pi(100, a);
  EXPECT_EQ(sum, table.pi_total(100));
  EXPECT_THROW(table.row(99), DomainError);
  EXPECT_THROW(table.column(4), DomainError);
}

TEST(PrimePowerIdentity, IdentityHoldsToRoundoff) {
  for (std::int64_t q : {4, 8, 12}) {
    for (std::uint64_t x : {1000ULL, 123457ULL, 1000000ULL}) {
      const auto table = race_counts(q, x, CheckpointRule::list(prime_power_checkpoints(x)));
      for (const auto a : table.residues()) EXPECT_LT(std::abs(prime_power_residual(x, q, a, table)), 1e-12);
    }
  }
}

TEST(PrimePowerIdentity, PrimePowerCheckpoints) {
  EXPECT_EQ(prime_power_checkpoints(1000), (std::vector<std::uint64_t>{1000, 31, 10, 5, 3, 2}));
  EXPECT_EQ(prime_power_checkpoints(2), (std::vector<std::uint64_t>{2}));
}

TEST(KthRoots, SmallCases) {
  EXPECT_EQ(kth_roots(8, 1, 2), (std::vector<std::int64_t>{1, 3, 5, 7}));
  EXPECT_TRUE(kth_roots(8, 3, 2).empty());
  EXPECT_EQ(kth_roots(8, 3, 3), (std::vector<std::int64_t>{3}));
  EXPECT_EQ(kth_roots(12, 1, 4).size(), 4u);
}

TEST(ErrorTerm, Definition) {
  const auto table = race_counts(4, 10000, CheckpointRule::list({10000}));
  const double expect = std::log(1e4) / 100.0 * (2.0 * 609.0 - 1229.0);
  EXPECT_EQ(table.pi(10000, 1), 609u);
  EXPECT_NEAR(error_term(10000, 4, 1, table), expect, 1e-12);
}

TEST(TruncatedExplicitFormula, MatchesComplexSum) {
  const ZeroList list = oracle_chi_m4();
  for (double x : {10.0, 1234.5, 1e6}) {
    std::complex<double> s = 0.0;
    for (double g : list.zeros) s += std::exp(std::complex<double>(0.0, g * std::log(x))) / std::complex<double>(0.5, g);
    EXPECT_NEAR(truncated_e_chi(x, list), 2.0 * s.real(), 1e-10) << x;
  }
}

TEST(TruncatedExplicitFormula, ZerosReduceTheResidual) {
  ZeroCatalog cat;
  cat.add(oracle_chi_m4());
  const auto table = race_counts(4, 200000, CheckpointRule::linear(997));
  std::array<double, 3> mean{};
  const std::array<double, 3> heights{1.0, 100.0, 1000.0};
  for (const auto x : table.checkpoints())
    for (std::size_t h = 0; h < 3; ++h) mean[h] += std::abs(reconstruction_residual(x, 4, 3, table, cat, heights[h]));
  EXPECT_LT(mean[1], mean[0]);
  EXPECT_LT(mean[2], mean[1]);
  EXPECT_THROW(reconstruction_residual(1000, 4, 3, race_counts(4, 1000, CheckpointRule::list({1000})), cat, 2000.0),
               DomainError);
}

TEST(Crossings, KnownEventsModFour) {
  const auto rec = crossings(4, 1, 3, 700000);
  ASSERT_GE(rec.events.size(), 4u);
  EXPECT_EQ(rec.events[0].x, 3u);
  EXPECT_EQ(rec.events[0].direction, -1);
  EXPECT_EQ(rec.events[1].x, 26861u);
  EXPECT_EQ(rec.events[1].direction, 1);
  EXPECT_EQ(rec.events[2].x, 26879u);
  EXPECT_EQ(rec.events[2].direction, -1);
  EXPECT_EQ(rec.events[3].x, 616841u);
  EXPECT_EQ(rec.events[3].direction, 1);
  for (std::size_t i = 1; i < rec.events.size(); ++i) EXPECT_EQ(rec.events[i].direction, -rec.events[i - 1].direction);
}

TEST(Crossings, FirstCrossing) {
  EXPECT_EQ(first_crossing(4, 1, 3, 100000), 26861u);
  EXPECT_EQ(first_crossing(4, 1, 3, 26860), std::nullopt);
  // 2 is itself in the class 2 mod 3.
  EXPECT_EQ(first_crossing(3, 2, 1, 1000), 2u);
  EXPECT_THROW(first_crossing(4, 1, 2, 100), DomainError);
}

TEST(Crossings, EventsAgreeWithCounts) {
  const auto rec = crossings(8, 3, 1, 50000);
  const auto table = race_counts(8, 50000, CheckpointRule::linear(1));
  int leader = 0;
  std::vector<CrossingEvent> expected;
  for (std::uint64_t x = 2; x <= 50000; ++x) {
    const auto a = table.pi(x, 3), b = table.pi(x, 1);
    const int now = a > b ? 1 : (b > a ? -1 : 0);
    if (now != 0 && now != leader) {
      expected.push_back({x, now});
      leader = now;
    }
  }
  ASSERT_EQ(rec.events.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(rec.events[i].x, expected[i].x);
    EXPECT_EQ(rec.events[i].direction, expected[i].direction);
  }
}

TEST(LogDensity, MatchesIntegerScan) {
  const std::vector<std::int64_t> order{3, 1};
  for (double k : {0.0, 1.0, 2.5}) {
    const auto d = log_density(4, order, 30000, k);
    const auto oracle = naive_log_density(4, order, 30000, k);
    EXPECT_NEAR(d.value, oracle.strict, 1e-9) << k;
    EXPECT_NEAR(d.ties, oracle.ties, 1e-9) << k;
  }
  const std::vector<std::int64_t> three{3, 7, 5};
  const auto d = log_density(8, three, 20000, 0.0);
  const auto oracle = naive_log_density(8, three, 20000, 0.0);
  EXPECT_NEAR(d.value, oracle.strict, 1e-9);
  EXPECT_NEAR(d.ties, oracle.ties, 1e-9);
}

TEST(LogDensity, SingleResidueIsCertain) {
  const std::vector<std::int64_t> one{3};
  EXPECT_DOUBLE_EQ(log_density(4, one, 10000).value, 1.0);
}

TEST(LogDensity, OrderingsPartitionTheRange) {
  const std::vector<std::vector<std::int64_t>> perms{{3, 5, 7}, {3, 7, 5}, {5, 3, 7}, {5, 7, 3}, {7, 3, 5}, {7, 5, 3}};
  double strict = 0.0;
  double ties = -1.0;
  for (const auto& p : perms) {
    const auto d = log_density(8, p, 200000, 1.0);
    strict += d.value;
    if (ties < 0.0) ties = d.ties;
    EXPECT_NEAR(d.ties, ties, 1e-14);
    EXPECT_GE(d.value, 0.0);
  }
  EXPECT_NEAR(strict + ties, 1.0, 1e-12);
}

TEST(LogDensity, TieFreeIsNearOneForTheClassicRace) {
  const std::vector<std::int64_t> order{3, 1};
  const auto d = log_density(4, order, 100000);
  EXPECT_GT(d.tie_free(), 0.95);
  EXPECT_LE(d.tie_free(), 1.0);
  EXPECT_THROW(log_density(4, order, 1000, -1.0), DomainError);
}

TEST(GapTrace, SmallModFourRace) {
  const std::vector<std::int64_t> res{1, 3};
  const auto g = gap_trace(4, res, 30000);
  ASSERT_FALSE(g.raw_minima.empty());
  EXPECT_EQ(g.raw_minima.front().x, 3u);
  EXPECT_EQ(g.raw_minima.back().x, 5u);
  EXPECT_EQ(g.raw_minima.back().gap, 0u);
  for (std::size_t i = 1; i < g.raw_minima.size(); ++i) EXPECT_LT(g.raw_minima[i].gap, g.raw_minima[i - 1].gap);
  for (std::size_t i = 1; i < g.normalized_minima.size(); ++i)
    EXPECT_LT(g.normalized_minima[i].normalized, g.normalized_minima[i - 1].normalized);
  EXPECT_EQ(g.tie_count, g.ties.size());
  EXPECT_TRUE(std::binary_search(g.ties.begin(), g.ties.end(), 26849u));
  EXPECT_TRUE(std::binary_search(g.ties.begin(), g.ties.end(), 26863u));
  EXPECT_FALSE(std::binary_search(g.ties.begin(), g.ties.end(), 26861u));
  const auto table = race_counts(4, 30000, CheckpointRule::list(g.ties));
  for (auto x : g.ties) EXPECT_EQ(table.pi(x, 1), table.pi(x, 3));
}

TEST(GapTrace, ThreeWayTiesMatchCounts) {
  const std::vector<std::int64_t> res{3, 5, 7};
  const auto g = gap_trace(8, res, 271);
  const auto table = race_counts(8, 271, CheckpointRule::linear(1));
  std::vector<std::uint64_t> expected;
  for (std::uint64_t p = 3; p <= 271; ++p) {
    if (!is_prime_trial(p) || p % 8 == 1) continue;
    if (table.pi(p, 3) == table.pi(p, 5) && table.pi(p, 5) == table.pi(p, 7)) expected.push_back(p);
  }
  EXPECT_EQ(g.ties, expected);
}

TEST(GapTrace, TieListIsCapped) {
  const std::vector<std::int64_t> res{1, 3};
  const auto g = gap_trace(4, res, 30000, 3);
  EXPECT_EQ(g.ties.size(), 3u);
  EXPECT_GT(g.tie_count, 3u);
}

TEST(FirstRank, AgreesWithCountsOracle) {
  const std::vector<std::int64_t> one{3};
  EXPECT_EQ(first_rank_reached(4, 1, one, 1, 100000), 26861u);
  const std::vector<std::int64_t> rivals{3, 5, 7};
  const auto table = race_counts(8, 200000, CheckpointRule::linear(1));
  for (unsigned rank = 1; rank <= 3; ++rank) {
    std::optional<std::uint64_t> expect;
    for (std::uint64_t x = 2; x <= 200000 && !expect; ++x) {
      unsigned beaten = 0;
      for (auto r : rivals) beaten += table.pi(x, 1) > table.pi(x, r);
      if (beaten >= 4 - rank) expect = x;
    }
    EXPECT_EQ(first_rank_reached(8, 1, rivals, rank, 200000), expect) << rank;
  }
  EXPECT_THROW(first_rank_reached(8, 1, rivals, 0, 100), DomainError);
}
