#include <algorithm>
#include <cmath>

#include "primerace/chars.hpp"
#include "primerace/densities.hpp"
#include "primerace/race.hpp"
#include "primerace/variance.hpp"
#include "racelab/app.hpp"
#include "racelab/reference.hpp"
#include "session.hpp"

namespace racelab {

using namespace primerace;

namespace {

struct Checklist {
  Table table;
  bool all_pass = true;

  Checklist() { table.columns = {"item", "computed", "reference", "tolerance", "pass"}; }

  void check(std::string item, double computed, double reference, double tolerance) {
    const bool ok = std::abs(computed - reference) <= tolerance;
    record(std::move(item), computed, reference, tolerance, ok);
  }
  void exact(std::string item, std::int64_t computed, std::int64_t reference) {
    record(std::move(item), computed, reference, 0.0, computed == reference);
  }
  void same(std::string item, const std::string& computed, const std::string& reference) {
    record(std::move(item), computed, reference, 0.0, computed == reference);
  }
  void record(std::string item, Cell computed, Cell reference, double tolerance, bool ok) {
    all_pass = all_pass && ok;
    table.add({std::move(item), std::move(computed), std::move(reference), tolerance, ok});
  }
};

std::vector<std::int64_t> nonsquares(std::int64_t q) {
  std::vector<std::int64_t> out;
  for (const auto a : reduced_residues(q)) {
    if (!is_square_residue(q, a)) out.push_back(a);
  }
  return out;
}

std::vector<std::int64_t> characters_mod(std::int64_t q) {
  std::vector<std::int64_t> ds;
  for (const auto& chi : nonprincipal_characters(q)) ds.push_back(chi.discriminant());
  return ds;
}

std::string delta_name(std::int64_t q, const std::vector<std::int64_t>& residues) {
  return "delta(" + std::to_string(q) + ";" + join_residues(residues) + ")";
}

void table1(Checklist& c) {
  const auto run = [&](std::int64_t q, const auto& residues, const auto& rows) {
    for (const auto& row : rows) {
      const Character chi(row.discriminant, q);
      for (std::size_t i = 0; i < residues.size(); ++i) {
        c.exact(chi.label() + "(" + std::to_string(residues[i]) + ") mod " + std::to_string(q), chi(residues[i]),
                row.values[i]);
      }
    }
  };
  run(8, reference::kTable1Residues8, reference::kTable1Mod8);
  run(12, reference::kTable1Residues12, reference::kTable1Mod12);
}

void table2(const Session& s, Checklist& c, Meta& meta) {
  std::vector<std::int64_t> ds;
  for (const auto& row : reference::kTable2) ds.push_back(row.discriminant);
  const auto catalog = s.catalog(ds);
  std::vector<std::pair<double, std::string>> by_value;
  for (const auto& row : reference::kTable2) {
    const ZeroList& list = catalog.at(row.discriminant);
    meta.zeros.push_back(describe_zeros(list));
    const VarianceReport r = variance_report(list);
    c.check("V(" + r.label + ") from zeros", r.v_from_zeros, row.value, reference::kTable2Tolerance);
    c.check("V(" + r.label + ") log-derivative minus zeros", r.v_from_logderiv - r.v_from_zeros, 0.0,
            reference::kLogDerivTolerance);
    by_value.emplace_back(r.v_from_zeros, r.label);
  }
  std::sort(by_value.rbegin(), by_value.rend());
  std::string order;
  for (const auto& [v, label] : by_value) order += (order.empty() ? "" : ">") + label;
  c.same("ordering of V", order, "chi_12>chi_-8>chi_8>chi_-4>chi_-3");
}

void two_way(const Session& s, Checklist& c, Meta& meta, std::uint64_t seed) {
  const MonteCarloOptions mc{s.config.samples, seed, s.config.workers};
  for (const std::int64_t q : {8, 12, 4, 3}) {
    const auto catalog = s.catalog(characters_mod(q));
    std::vector<RaceModel> models;
    std::vector<DensityEvent> events;
    for (const auto a : nonsquares(q)) {
      events.push_back({{models.size()}, false});
      models.push_back(build_two_way(q, a, catalog, s.config.height));
    }
    for (const auto& m : models) {
      for (const auto& t : m.terms) {
        if (std::none_of(meta.zeros.begin(), meta.zeros.end(),
                         [&](const auto& z) { return z.label == t.character.label(); })) {
          meta.zeros.push_back(describe_zeros(t.zeros));
        }
      }
    }
    const auto estimates = mc_batch(models, events, mc);
    std::vector<std::pair<double, std::int64_t>> computed_order;
    std::vector<std::pair<double, std::int64_t>> reference_order;
    for (const auto& row : reference::kTwoWay) {
      if (row.q != q) continue;
      const auto it = std::find_if(models.begin(), models.end(), [&](const auto& m) { return m.residue == row.a; });
      const auto& e = estimates[static_cast<std::size_t>(it - models.begin())];
      c.check(delta_name(q, {row.a, 1}), e.value, row.value, row.tolerance);
      computed_order.emplace_back(e.value, row.a);
      reference_order.emplace_back(row.value, row.a);
    }
    if (computed_order.size() > 1) {
      std::sort(computed_order.rbegin(), computed_order.rend());
      std::sort(reference_order.rbegin(), reference_order.rend());
      std::vector<std::int64_t> got, want;
      for (const auto& p : computed_order) got.push_back(p.second);
      for (const auto& p : reference_order) want.push_back(p.second);
      c.same("two-way order mod " + std::to_string(q), join_residues(got, ">"), join_residues(want, ">"));
    }
    if (q == 8) {
      const auto it = std::find_if(models.begin(), models.end(), [](const auto& m) { return m.residue == 5; });
      const auto& mc_est = estimates[static_cast<std::size_t>(it - models.begin())];
      const DensityEstimate cf = cf_two_way(*it);
      const double sigma = std::hypot(mc_est.standard_error, cf.standard_error);
      c.check("characteristic function minus Monte Carlo, delta(8;5,1)", cf.value - mc_est.value, 0.0, 3.0 * sigma);
    }
  }
}

void three_way(const Session& s, Checklist& c, Meta& meta, std::uint64_t seed) {
  const MonteCarloOptions mc{s.config.samples, seed, s.config.workers};
  for (const std::int64_t q : {8, 12}) {
    const auto catalog = s.catalog(characters_mod(q));
    const auto residues = nonsquares(q);
    std::vector<RaceModel> models;
    for (const auto a : residues) models.push_back(build_tilde(q, a, catalog, s.config.height));
    for (const auto& m : models) meta.zeros.push_back(describe_zeros(m.terms.front().zeros));
    std::vector<std::size_t> perm{0, 1, 2};
    std::vector<DensityEvent> events;
    do {
      events.push_back({perm, false});
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto estimates = mc_batch(models, events, mc);
    const auto find = [&](const std::array<std::int64_t, 3>& order) -> const DensityEstimate& {
      for (std::size_t e = 0; e < events.size(); ++e) {
        bool match = true;
        for (std::size_t k = 0; k < 3; ++k) match = match && residues[events[e].models[k]] == order[k];
        if (match) return estimates[e];
      }
      throw ConfigError("ordering not among the residues");
    };
    for (const auto& row : reference::kThreeWay) {
      if (row.q != q) continue;
      const std::array<std::int64_t, 3> reversed{row.order[2], row.order[1], row.order[0]};
      const auto& fwd = find(row.order);
      const auto& rev = find(reversed);
      c.check(delta_name(q, {row.order.begin(), row.order.end()}), fwd.value, row.value,
              reference::kThreeWayTolerance);
      c.check(delta_name(q, {reversed.begin(), reversed.end()}), rev.value, row.value, reference::kThreeWayTolerance);
      const SymmetryReport sym = symmetry_check(fwd, rev);
      c.check("reversal difference " + delta_name(q, {row.order.begin(), row.order.end()}), sym.difference, 0.0,
              3.0 * sym.combined_se);
    }
    double total = 0.0;
    double var = 0.0;
    for (const auto& e : estimates) {
      total += e.value;
      var += e.standard_error * e.standard_error;
    }
    c.check("sum over orderings mod " + std::to_string(q), total, 1.0, 3.0 * std::sqrt(var));
  }
}

void crossings_target(const Session& s, Checklist& c, bool extreme) {
  const auto first = first_crossing(4, 1, 3, 1'000'000, s.sieve());
  c.exact("first x with pi(x;4,1) > pi(x;4,3)", first ? static_cast<std::int64_t>(*first) : -1,
          static_cast<std::int64_t>(reference::kFirstCrossing4));
  const CrossingRecord rec = crossings(4, 1, 3, 1'000'000, s.sieve());
  std::vector<std::uint64_t> leads;
  for (const auto& e : rec.events) {
    if (e.direction > 0) leads.push_back(e.x);
  }
  c.exact("second lead of 1 mod 4 begins", leads.size() > 1 ? static_cast<std::int64_t>(leads[1]) : -1,
          static_cast<std::int64_t>(reference::kSecondLead4));
  if (extreme) {
    const std::int64_t rivals[] = {3, 5, 7};
    const auto third = first_rank_reached(8, 1, rivals, 3, 600'000'000, s.sieve());
    c.exact("first x with 1 mod 8 strictly third or better", third ? static_cast<std::int64_t>(*third) : -1,
            static_cast<std::int64_t>(reference::kUndisputedThird8));
  }
}

}  // namespace

int reproduce(const Session& s, ReproduceTarget target, bool extreme) {
  Checklist c;
  Meta meta{"reproduce", {}, std::nullopt, {}, {}};
  s.common_params(meta);
  switch (target) {
    case ReproduceTarget::table1:
      meta.param("target", std::string("table1"));
      table1(c);
      break;
    case ReproduceTarget::table2:
      meta.param("target", std::string("table2"));
      table2(s, c, meta);
      break;
    case ReproduceTarget::two_way: {
      meta.param("target", std::string("two-way"));
      meta.param("samples", s.config.samples);
      meta.seed = s.require_seed("reproduce two-way");
      two_way(s, c, meta, *meta.seed);
      break;
    }
    case ReproduceTarget::three_way: {
      meta.param("target", std::string("three-way"));
      meta.param("samples", s.config.samples);
      meta.seed = s.require_seed("reproduce three-way");
      three_way(s, c, meta, *meta.seed);
      break;
    }
    case ReproduceTarget::crossings:
      meta.param("target", std::string("crossings"));
      meta.param("extreme", std::string(extreme ? "true" : "false"));
      crossings_target(s, c, extreme);
      break;
  }
  s.emit(meta, c.table);
  return c.all_pass ? kSuccess : kComputationFailure;
}

}  // namespace racelab
