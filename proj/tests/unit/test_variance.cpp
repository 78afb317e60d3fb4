#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "primerace/errors.hpp"
#include "primerace/variance.hpp"
#include "primerace/zeros.hpp"

using namespace primerace;

namespace {

// Published V(chi) to five decimals.
struct Published {
  std::int64_t d;
  double v;
};
constexpr Published kPublished[] = {{-3, 0.11323}, {-4, 0.15557}, {8, 0.23543}, {-8, 0.31607}, {12, 0.33017}};

VarianceReport report(std::int64_t d, double v) {
  VarianceReport r;
  r.discriminant = d;
  r.v_from_zeros = v;
  return r;
}

std::vector<VarianceReport> published_reports() {
  std::vector<VarianceReport> out;
  for (const auto& p : kPublished) out.push_back(report(p.d, p.v));
  return out;
}

}  // namespace

// Frozen from mpmath quad of 2/(1/4+t^2) * log(kt/2pi)/(2pi) at 30 digits.
TEST(VarianceTail, MatchesQuadratureOracle) {
  EXPECT_NEAR(variance_tail(4, 1000.0), 0.002373373263201608, 1e-13);
  EXPECT_NEAR(variance_tail(8, 2000.0), 0.0014073222946933325, 1e-13);
  EXPECT_NEAR(variance_tail(24, 0.0), 0.9710906541256940, 1e-12);
  EXPECT_NEAR(variance_tail(3, 0.5), 0.1510385313129959, 1e-12);
  EXPECT_NEAR(variance_tail(12, 5000.0), 0.000647074516902887, 1e-13);
}

TEST(VarianceTail, DecreasesWithHeightAndMatchesLeadingTerm) {
  double prev = variance_tail(8, 10.0);
  for (double t = 20.0; t <= 10000.0; t *= 2.0) {
    const double v = variance_tail(8, t);
    EXPECT_LT(v, prev);
    prev = v;
  }
  // Leading asymptotic (1/pi)(log(kT/2pi) + 1)/T.
  const double t = 5000.0;
  const double lead = (std::log(8.0 * t / (2.0 * std::numbers::pi)) + 1.0) / (std::numbers::pi * t);
  EXPECT_NEAR(variance_tail(8, t) / lead, 1.0, 1e-6);
}

// The tail behaves like log(T)/T, so doubling T leaves slightly more than half.
TEST(VarianceTail, DoublingHeightRoughlyHalves) {
  for (std::int64_t k : {3, 4, 8, 12}) {
    for (double t : {500.0, 1000.0, 2000.0}) {
      const double ratio = variance_tail(k, 2.0 * t) / variance_tail(k, t);
      const double lead = std::log(k * t / (2.0 * std::numbers::pi)) + 1.0;
      EXPECT_GT(ratio, 0.5);
      EXPECT_NEAR(ratio, 0.5 * (lead + std::numbers::ln2) / lead, 1e-5) << k << " " << t;
    }
  }
}

TEST(LogDerivative, ReproducesPublishedVariances) {
  for (const auto& p : kPublished) {
    EXPECT_NEAR(v_from_logderiv(Character(p.d, std::abs(p.d))), p.v, 5e-5) << p.d;
  }
}

TEST(LogDerivative, ParityTerm) {
  EXPECT_DOUBLE_EQ(parity_term(Character(-4, 4)), 0.0);
  EXPECT_DOUBLE_EQ(parity_term(Character(8, 8)), -2.0 * std::numbers::ln2);
}

TEST(ZeroSum, AgreesWithLogDerivativeAtHeight1000) {
  const ZeroList list = import_zeros(std::filesystem::path(PRIMERACE_TEST_DATA) / "chi_-4_T1000_mpmath.zeros", true);
  const VarianceReport r = variance_report(list);
  EXPECT_EQ(r.zero_count, 868u);
  EXPECT_LT(r.discrepancy, 1e-4);
  EXPECT_TRUE(r.accepted());
  EXPECT_NEAR(r.v_from_zeros, 0.15557, 5e-5);
  EXPECT_DOUBLE_EQ(r.tail_correction, variance_tail(4, 1000.0));
}

TEST(ZeroSum, TailClosesTheGapAtEveryTruncation) {
  const ZeroList list = find_zeros(Character(-3, 3), 400.0);
  const double target = v_from_logderiv(Character(-3, 3));
  for (double t : {100.0, 200.0, 400.0}) {
    const auto cut = list.truncated(t);
    const auto v = v_from_zeros(cut);
    EXPECT_LT(v.partial, target);
    // Oscillation of N(T) around its mean keeps the error near log(T)/T^2.
    EXPECT_NEAR(v.total(), target, 4.0 * std::log(t) / (t * t)) << t;
  }
}

TEST(ZeroSum, RejectsUnverifiedLists) {
  ZeroList list;
  list.discriminant = -4;
  list.height = 10.0;
  list.zeros = {6.020948904698};
  EXPECT_THROW(v_from_zeros(list), DomainError);
}

TEST(RaceVariances, FollowFromCharacterVariances) {
  const auto rv = race_variances(8, published_reports());
  const double w = 0.31607 + 0.15557 + 0.23543;
  EXPECT_NEAR(rv.w, w, 1e-15);
  // Two-way variance counts each character with chi(a) = -1 four times.
  EXPECT_NEAR(rv.two_way.at(3), 4.0 * (0.15557 + 0.23543), 1e-14);
  EXPECT_NEAR(rv.tilde.at(3), 4.0 * 0.31607, 1e-14);
  for (const auto& [a, var] : rv.two_way) EXPECT_NEAR(var + rv.tilde.at(a), 4.0 * w, 1e-14);
  EXPECT_EQ(rv.selector.at(3), -8);
  EXPECT_EQ(rv.selector.at(5), -4);
  EXPECT_EQ(rv.selector.at(7), 8);
}

TEST(RaceVariances, MissingCharacterIsReported) {
  auto reports = published_reports();
  reports.erase(reports.begin() + 2);  // drop chi_8
  EXPECT_THROW(race_variances(8, reports), DomainError);
}

TEST(PredictedOrderings, PublishedRanking) {
  const auto p8 = predicted_orderings(race_variances(8, published_reports()));
  EXPECT_EQ(p8.two_way_descending, (std::vector<std::int64_t>{3, 7, 5}));
  EXPECT_EQ(p8.middle, 5);
  EXPECT_EQ(p8.extremes, 3);
  const auto p12 = predicted_orderings(race_variances(12, published_reports()));
  EXPECT_EQ(p12.two_way_descending, (std::vector<std::int64_t>{11, 5, 7}));
  EXPECT_EQ(p12.middle, 7);
  EXPECT_EQ(p12.extremes, 11);
}
