#include "primerace/variance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "primerace/compensated_sum.hpp"
#include "primerace/errors.hpp"
#include "primerace/lfunc.hpp"

namespace primerace {

double variance_tail(std::int64_t conductor, double height) {
  if (conductor <= 0) throw DomainError("variance_tail: conductor must be positive");
  if (height < 0.0) throw DomainError("variance_tail: height must be nonnegative");
  const double k = static_cast<double>(conductor);
  const double two_pi = 2.0 * std::numbers::pi;
  const double c = k / two_pi;
  // Past t = 1 expand 1/(1/4 + t^2) in powers of 1/(4t^2) and integrate
  // log(ct) t^(-2n-2) termwise; the ratio is at most 1/4.
  const auto series_from = [c](double t0) {
    const double log_ct = std::log(c * t0);
    const double r = -1.0 / (4.0 * t0 * t0);
    CompensatedSum sum;
    double power = 1.0 / t0;
    for (int n = 0; n < 200; ++n) {
      const double m = 2.0 * n + 1.0;
      const double term = power * (log_ct / m + 1.0 / (m * m));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum.value())) break;
      power *= r;
    }
    return sum.value() / std::numbers::pi;
  };
  const double start = std::max(height, 1.0 / c);  // density clamped to zero below 2pi/k
  if (start >= 1.0) return series_from(start);
  // 2pi/k < 1 only when k > 2pi; integrate up to 1 first.
  const auto integrand = [&](double t) { return 2.0 / (0.25 + t * t) * std::log(c * t) / two_pi; };
  double error = 0.0;
  const double head = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, start, 1.0, 15,
                                                                                     1e-14, &error);
  if (error > 1e-12) throw ConvergenceError("variance_tail: quadrature did not converge", error);
  return head + series_from(1.0);
}

ZeroSumVariance v_from_zeros(const ZeroList& zeros) {
  if (!zeros.verified) throw DomainError("v_from_zeros: " + zeros.label() + " is not verified");
  CompensatedSum sum;
  // Smallest terms first.
  for (auto it = zeros.zeros.rbegin(); it != zeros.zeros.rend(); ++it) {
    sum += 2.0 / (0.25 + (*it) * (*it));
  }
  return {sum.value(), variance_tail(zeros.character().conductor(), zeros.height)};
}

double parity_term(const Character& chi) noexcept {
  return chi.is_even() ? -2.0 * std::numbers::ln2 : 0.0;
}

double v_from_logderiv(const Character& chi_in) {
  const Character chi = chi_in.primitive();
  const auto at_one = l_value_with_derivative(chi, Complex(1.0, 0.0));
  if (std::abs(at_one.value) < 1e-6) {
    throw ComputationError("v_from_logderiv: L(1, " + chi.label() + ") too small for a stable log-derivative");
  }
  const double log_derivative = (at_one.derivative / at_one.value).real();
  const double k = static_cast<double>(chi.conductor());
  return std::log(k / std::numbers::pi) - kEulerGamma + parity_term(chi) + 2.0 * log_derivative;
}

VarianceReport variance_report(const ZeroList& zeros) {
  VarianceReport r;
  r.discriminant = zeros.discriminant;
  r.label = zeros.label();
  r.height = zeros.height;
  r.zero_count = zeros.zeros.size();
  const auto from_zeros = v_from_zeros(zeros);
  r.v_from_zeros = from_zeros.total();
  r.tail_correction = from_zeros.tail;
  r.v_from_logderiv = v_from_logderiv(zeros.character());
  r.discrepancy = std::abs(r.v_from_zeros - r.v_from_logderiv);
  return r;
}

RaceVariances race_variances(std::int64_t q, const std::vector<VarianceReport>& reports) {
  RaceVariances rv;
  rv.q = q;
  for (const auto& chi : nonprincipal_characters(q)) {
    const auto it = std::find_if(reports.begin(), reports.end(),
                                 [&](const VarianceReport& r) { return r.discriminant == chi.discriminant(); });
    if (it == reports.end()) {
      throw DomainError("race_variances: no variance report for " + chi.label() + " (mod " + std::to_string(q) + ")");
    }
    rv.v[chi.discriminant()] = it->v_from_zeros;
    rv.w += it->v_from_zeros;
  }
  for (const auto a : reduced_residues(q)) {
    if (is_square_residue(q, a)) continue;
    const Character sel = selector_character(q, a);
    const double v_sel = rv.v.at(sel.discriminant());
    rv.selector[a] = sel.discriminant();
    rv.two_way[a] = 4.0 * rv.w - 4.0 * v_sel;
    rv.tilde[a] = 4.0 * v_sel;
  }
  return rv;
}

PredictedOrderings predicted_orderings(const RaceVariances& rv) {
  if (rv.two_way.empty()) throw DomainError("predicted_orderings: no nonsquare residues");
  PredictedOrderings p;
  p.q = rv.q;
  for (const auto& [a, var] : rv.two_way) p.two_way_descending.push_back(a);
  std::stable_sort(p.two_way_descending.begin(), p.two_way_descending.end(),
                   [&](std::int64_t a, std::int64_t b) { return rv.two_way.at(a) < rv.two_way.at(b); });
  const auto by_tilde = [&](const auto& x, const auto& y) { return x.second < y.second; };
  p.middle = std::min_element(rv.tilde.begin(), rv.tilde.end(), by_tilde)->first;
  p.extremes = std::max_element(rv.tilde.begin(), rv.tilde.end(), by_tilde)->first;
  return p;
}

}  // namespace primerace
