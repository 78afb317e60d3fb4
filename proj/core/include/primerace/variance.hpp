#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "primerace/chars.hpp"
#include "primerace/zeros.hpp"

namespace primerace {

/// Euler's constant to 20 digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Sum of 2/(1/4 + gamma^2) over a finite zero list plus the smooth tail above T.
struct ZeroSumVariance {
  double partial = 0.0;
  double tail = 0.0;
  double total() const noexcept { return partial + tail; }
};

/// Integral over (T, inf) of 2/(1/4 + t^2) * (1/2pi) log(k t / 2pi) dt, the
/// density clamped at zero below t = 2pi/k.
double variance_tail(std::int64_t conductor, double height);

/// Requires a verified list.
ZeroSumVariance v_from_zeros(const ZeroList& zeros);

/// log(k/pi) - gamma_0 - (1 + chi(-1)) log 2 + 2 Re L'(1,chi)/L(1,chi), k the conductor.
double v_from_logderiv(const Character& chi);

/// The parity term -(1 + chi(-1)) log 2.
double parity_term(const Character& chi) noexcept;

struct VarianceReport {
  std::int64_t discriminant = 0;
  std::string label;
  double height = 0.0;
  std::size_t zero_count = 0;
  double v_from_zeros = 0.0;      // partial sum + tail
  double tail_correction = 0.0;
  double v_from_logderiv = 0.0;
  double discrepancy = 0.0;

  static constexpr double kAcceptance = 1e-4;
  bool accepted() const noexcept { return discrepancy < kAcceptance; }
};

VarianceReport variance_report(const ZeroList& zeros);

/// Variances of the two-way and recentred race variables for one modulus.
struct RaceVariances {
  std::int64_t q = 0;
  double w = 0.0;                                 // sum of V over nonprincipal chi
  std::map<std::int64_t, double> v;               // V(chi) by discriminant
  std::map<std::int64_t, double> two_way;         // Var(X_{q;a,1}) by nonsquare a
  std::map<std::int64_t, double> tilde;           // Var(X~_{q;a}) by nonsquare a
  std::map<std::int64_t, std::int64_t> selector;  // a -> discriminant of selector character
};

/// Uses the zero-sum value of each report. Throws DomainError if a character is missing.
RaceVariances race_variances(std::int64_t q, const std::vector<VarianceReport>& reports);

struct PredictedOrderings {
  std::int64_t q = 0;
  std::vector<std::int64_t> two_way_descending;  // residues a, largest delta_{q;a,1} first
  std::int64_t middle = 0;                       // most often in second place
  std::int64_t extremes = 0;                     // most often first or last
};

/// Smaller variance ranks higher in the two-way races; in the three-way race
/// the smallest recentred variance stays in the middle.
PredictedOrderings predicted_orderings(const RaceVariances& rv);

}  // namespace primerace
