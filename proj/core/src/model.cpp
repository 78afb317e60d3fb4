#include <cmath>
#include <cstdio>

#include "primerace/compensated_sum.hpp"
#include "primerace/densities.hpp"
#include "primerace/errors.hpp"
#include "primerace/variance.hpp"

namespace primerace {

namespace {

ModelTerm make_term(const Character& chi, double coefficient, const ZeroCatalog& zeros, double height) {
  const ZeroList& full = zeros.at(chi.discriminant());
  if (!full.verified) throw DomainError("race model: zero list " + full.label() + " is not verified");
  ModelTerm term{chi, coefficient, full.truncated(height), 0.0};
  term.tail_sd = std::abs(coefficient) * std::sqrt(variance_tail(chi.conductor(), height));
  return term;
}

void require_nonsquare(std::int64_t q, std::int64_t a, const char* who) {
  if (is_square_residue(q, a)) {
    throw DomainError(std::string(who) + ": " + std::to_string(a) + " is a square mod " + std::to_string(q) +
                      "; only nonsquare residues are modelled");
  }
}

}  // namespace

double RaceModel::variance() const {
  CompensatedSum total;
  for (const auto& term : terms) {
    CompensatedSum v;
    for (auto it = term.zeros.zeros.rbegin(); it != term.zeros.zeros.rend(); ++it) v += 2.0 / (0.25 + *it * *it);
    total += term.coefficient * term.coefficient * v.value();
    total += term.tail_sd * term.tail_sd;
  }
  return total.value();
}

std::string RaceModel::describe() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", offset);
  std::string s = buf;
  for (const auto& term : terms) {
    std::snprintf(buf, sizeof buf, " %c %gX(%s)", term.coefficient < 0 ? '-' : '+', std::abs(term.coefficient),
                  term.character.label().c_str());
    s += buf;
  }
  return s;
}

RaceModel build_two_way(std::int64_t q, std::int64_t a, const ZeroCatalog& zeros, double height) {
  require_nonsquare(q, a, "build_two_way");
  RaceModel model;
  model.q = q;
  model.residue = ((a % q) + q) % q;
  model.kind = ModelKind::two_way;
  model.offset = c_of(q, 1) - c_of(q, a);
  model.height = height;
  for (const auto& chi : nonprincipal_characters(q)) {
    const double coefficient = 1 - chi(a);
    if (coefficient != 0.0) model.terms.push_back(make_term(chi, coefficient, zeros, height));
  }
  return model;
}

RaceModel build_tilde(std::int64_t q, std::int64_t a, const ZeroCatalog& zeros, double height) {
  require_nonsquare(q, a, "build_tilde");
  const Character selector = selector_character(q, a);
  RaceModel model;
  model.q = q;
  model.residue = ((a % q) + q) % q;
  model.kind = ModelKind::tilde;
  model.offset = -(c_of(q, a) + c_of(q, 1));
  model.height = height;
  model.terms.push_back(make_term(selector, 2.0, zeros, height));
  return model;
}

std::string to_string(DensityMethod m) {
  return m == DensityMethod::monte_carlo ? "monte-carlo" : "characteristic-function";
}

SymmetryReport symmetry_check(const DensityEstimate& forward, const DensityEstimate& reversed) {
  SymmetryReport r;
  r.difference = std::abs(forward.value - reversed.value);
  r.combined_se = std::hypot(forward.standard_error, reversed.standard_error);
  return r;
}

}  // namespace primerace
