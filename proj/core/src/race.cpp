#include "primerace/race.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "primerace/compensated_sum.hpp"
#include "primerace/errors.hpp"

namespace primerace {

namespace {

std::uint64_t parse_unsigned(std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("expected a number, got '" + s + "'");
  }
  if (used != s.size() || value < 0.0 || value != std::floor(value) || value > 1.8e19) {
    throw DomainError("expected a nonnegative integer, got '" + s + "'");
  }
  return static_cast<std::uint64_t>(value);
}

// Column index for every residue mod q, -1 when not coprime.
std::vector<int> column_map(std::int64_t q, const std::vector<std::int64_t>& residues) {
  std::vector<int> col(static_cast<std::size_t>(q), -1);
  for (std::size_t i = 0; i < residues.size(); ++i) col[static_cast<std::size_t>(residues[i])] = static_cast<int>(i);
  return col;
}

std::int64_t normalise_residue(std::int64_t q, std::int64_t a) {
  const std::int64_t r = a % q;
  return r < 0 ? r + q : r;
}

// Validated, reduced copies of the residues plus their class lookup.
struct Contestants {
  std::vector<std::int64_t> residues;
  std::vector<int> slot;  // slot[p % q] = contestant index or -1
};

Contestants make_contestants(std::int64_t q, std::span<const std::int64_t> residues) {
  if (q < 3) throw DomainError("race: modulus must be at least 3");
  Contestants c;
  c.slot.assign(static_cast<std::size_t>(q), -1);
  for (const auto a_in : residues) {
    const std::int64_t a = normalise_residue(q, a_in);
    if (gcd(a, q) != 1) {
      throw DomainError("race: residue " + std::to_string(a_in) + " is not coprime to " + std::to_string(q));
    }
    if (c.slot[static_cast<std::size_t>(a)] != -1) {
      throw DomainError("race: residue " + std::to_string(a_in) + " listed twice");
    }
    c.slot[static_cast<std::size_t>(a)] = static_cast<int>(c.residues.size());
    c.residues.push_back(a);
  }
  return c;
}

}  // namespace

CheckpointRule CheckpointRule::log_per_decade(unsigned per_decade) {
  if (per_decade == 0) throw DomainError("checkpoints: log:N needs N >= 1");
  CheckpointRule r;
  r.kind_ = Kind::log_per_decade;
  r.parameter_ = per_decade;
  return r;
}

CheckpointRule CheckpointRule::linear(std::uint64_t step) {
  if (step == 0) throw DomainError("checkpoints: linear:N needs N >= 1");
  CheckpointRule r;
  r.kind_ = Kind::linear;
  r.parameter_ = step;
  return r;
}

CheckpointRule CheckpointRule::list(std::vector<std::uint64_t> points) {
  CheckpointRule r;
  r.kind_ = Kind::explicit_list;
  r.points_ = std::move(points);
  return r;
}

CheckpointRule CheckpointRule::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("checkpoints: expected log:N, linear:N or list:a,b,...; got '" + std::string(text) + "'");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view arg = text.substr(colon + 1);
  if (kind == "log") return log_per_decade(static_cast<unsigned>(parse_unsigned(arg)));
  if (kind == "linear") return linear(parse_unsigned(arg));
  if (kind == "list") {
    std::vector<std::uint64_t> points;
    std::size_t start = 0;
    while (start <= arg.size()) {
      const auto comma = arg.find(',', start);
      const auto item = arg.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (!item.empty()) points.push_back(parse_unsigned(item));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return list(std::move(points));
  }
  throw DomainError("checkpoints: unknown rule '" + std::string(kind) + "'");
}

std::vector<std::uint64_t> CheckpointRule::generate(std::uint64_t limit) const {
  std::vector<std::uint64_t> out;
  switch (kind_) {
    case Kind::log_per_decade: {
      const double decades = std::log10(static_cast<double>(std::max<std::uint64_t>(limit, 2)));
      const auto steps = static_cast<std::uint64_t>(std::ceil(decades * static_cast<double>(parameter_)));
      for (std::uint64_t j = 0; j <= steps; ++j) {
        const double v = std::floor(std::pow(10.0, static_cast<double>(j) / static_cast<double>(parameter_)));
        if (v >= 2.0 && v <= static_cast<double>(limit)) out.push_back(static_cast<std::uint64_t>(v));
      }
      break;
    }
    case Kind::linear:
      for (std::uint64_t x = parameter_; x <= limit; x += parameter_) {
        if (x >= 2) out.push_back(x);
      }
      break;
    case Kind::explicit_list:
      for (const auto x : points_) {
        if (x >= 2 && x <= limit) out.push_back(x);
      }
      break;
  }
  if (limit >= 2) out.push_back(limit);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string CheckpointRule::describe() const {
  switch (kind_) {
    case Kind::log_per_decade:
      return "log:" + std::to_string(parameter_);
    case Kind::linear:
      return "linear:" + std::to_string(parameter_);
    case Kind::explicit_list: {
      std::string s = "list:";
      for (std::size_t i = 0; i < points_.size(); ++i) s += (i ? "," : "") + std::to_string(points_[i]);
      return s;
    }
  }
  return {};
}

RaceSnapshotTable::RaceSnapshotTable(std::int64_t q, std::vector<std::uint64_t> checkpoints)
    : q_(q), residues_(reduced_residues(q)), checkpoints_(std::move(checkpoints)) {
  column_of_ = column_map(q, residues_);
  const std::size_t cells = checkpoints_.size() * residues_.size();
  counts_.assign(cells, 0);
  theta_.assign(cells, 0.0);
  psi_.assign(cells, 0.0);
  pi_total_.assign(checkpoints_.size(), 0);
  pi_divisors_.assign(checkpoints_.size(), 0);
}

std::size_t RaceSnapshotTable::row(std::uint64_t x) const {
  const auto it = std::lower_bound(checkpoints_.begin(), checkpoints_.end(), x);
  if (it == checkpoints_.end() || *it != x) {
    throw DomainError("race table has no checkpoint at x=" + std::to_string(x));
  }
  return static_cast<std::size_t>(it - checkpoints_.begin());
}

std::size_t RaceSnapshotTable::column(std::int64_t a) const {
  const std::int64_t r = normalise_residue(q_, a);
  const int c = column_of_[static_cast<std::size_t>(r)];
  if (c < 0) throw DomainError("residue " + std::to_string(a) + " is not coprime to " + std::to_string(q_));
  return static_cast<std::size_t>(c);
}

RaceSnapshotTable race_counts(std::int64_t q, std::uint64_t limit, const CheckpointRule& rule,
                              const SieveOptions& sieve) {
  if (q < 3) throw DomainError("race_counts: modulus must be at least 3");
  RaceSnapshotTable table(q, rule.generate(limit));
  const auto& checkpoints = table.checkpoints();
  const std::size_t width = table.residues().size();
  const std::vector<int> col = column_map(q, table.residues());

  struct PrimePower {
    std::uint64_t value;
    double log_p;
    int column;
  };
  std::vector<PrimePower> powers;
  for (const auto p : primes_up_to(integer_root(limit, 2))) {
    if (static_cast<std::int64_t>(p) <= q && q % static_cast<std::int64_t>(p) == 0) continue;
    const double log_p = std::log(static_cast<double>(p));
    for (std::uint64_t v = p * p;; v *= p) {
      const int c = col[static_cast<std::size_t>(v % static_cast<std::uint64_t>(q))];
      if (c >= 0) powers.push_back({v, log_p, c});
      if (v > limit / p) break;
    }
  }
  std::sort(powers.begin(), powers.end(), [](const auto& a, const auto& b) { return a.value < b.value; });

  std::vector<std::uint64_t> counts(width, 0);
  std::vector<CompensatedSum> theta(width);
  std::vector<CompensatedSum> psi(width);
  std::uint64_t total = 0;
  std::uint64_t divisors = 0;
  std::size_t next_checkpoint = 0;
  std::size_t next_power = 0;

  const auto record_below = [&](std::uint64_t v) {
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] < v) {
      const std::size_t r = next_checkpoint++;
      for (std::size_t c = 0; c < width; ++c) {
        table.count_at(r, c) = counts[c];
        table.theta_at(r, c) = theta[c].value();
        table.psi_at(r, c) = psi[c].value();
      }
      table.pi_total_at(r) = total;
      table.pi_divisors_at(r) = divisors;
    }
  };
  const auto powers_below = [&](std::uint64_t v) {
    while (next_power < powers.size() && powers[next_power].value < v) {
      const auto& pp = powers[next_power++];
      record_below(pp.value);
      psi[pp.column] += pp.log_p;
    }
  };

  for_each_prime(
      limit,
      [&](std::uint64_t p) {
        powers_below(p);
        record_below(p);
        ++total;
        const int c = col[static_cast<std::size_t>(p % static_cast<std::uint64_t>(q))];
        if (c < 0) {
          ++divisors;
          return;
        }
        ++counts[c];
        const double log_p = std::log(static_cast<double>(p));
        theta[c] += log_p;
        psi[c] += log_p;
      },
      sieve);
  powers_below(std::numeric_limits<std::uint64_t>::max());
  record_below(std::numeric_limits<std::uint64_t>::max());
  return table;
}

std::vector<std::uint64_t> prime_power_checkpoints(std::uint64_t x) {
  std::vector<std::uint64_t> out;
  for (unsigned k = 1;; ++k) {
    const std::uint64_t y = integer_root(x, k);
    if (y < 2) break;
    if (out.empty() || out.back() != y) out.push_back(y);
  }
  return out;
}

std::vector<std::int64_t> kth_roots(std::int64_t q, std::int64_t a, unsigned k) {
  const std::int64_t target = normalise_residue(q, a);
  std::vector<std::int64_t> out;
  for (const auto c : reduced_residues(q)) {
    std::int64_t v = 1 % q;
    for (unsigned i = 0; i < k; ++i) v = v * c % q;
    if (v == target) out.push_back(c);
  }
  return out;
}

double prime_power_residual(std::uint64_t x, std::int64_t q, std::int64_t a, const RaceSnapshotTable& table) {
  if (table.q() != q) throw DomainError("prime_power_residual: table modulus mismatch");
  const double lhs = table.theta(x, a);
  CompensatedSum rhs(table.psi(x, a));
  for (unsigned k = 2;; ++k) {
    const std::uint64_t y = integer_root(x, k);
    if (y < 2) break;
    for (const auto c : kth_roots(q, a, k)) rhs += -table.theta(y, c);
  }
  return (lhs - rhs.value()) / std::max(1.0, std::abs(table.psi(x, a)));
}

double error_term(std::uint64_t x, std::int64_t q, std::int64_t a, const RaceSnapshotTable& table) {
  if (x < 2) throw DomainError("error_term: x must be at least 2");
  const double xd = static_cast<double>(x);
  const double diff = static_cast<double>(euler_phi(q)) * static_cast<double>(table.pi(x, a)) -
                      static_cast<double>(table.pi_total(x));
  return std::log(xd) / std::sqrt(xd) * diff;
}

namespace {

double e_chi_sum(double x, std::span<const double> zeros) {
  const double log_x = std::log(x);
  CompensatedSum sum;
  for (const double g : zeros) {
    sum += (0.5 * std::cos(g * log_x) + g * std::sin(g * log_x)) / (0.25 + g * g);
  }
  return 2.0 * sum.value();
}

}  // namespace

double truncated_e_chi(double x, const ZeroList& zeros) {
  if (!zeros.verified) throw DomainError("truncated_e_chi: " + zeros.label() + " is not verified");
  return e_chi_sum(x, zeros.zeros);
}

double reconstruction_residual(std::uint64_t x, std::int64_t q, std::int64_t a, const RaceSnapshotTable& table,
                               const ZeroCatalog& zeros, double height) {
  double residual = error_term(x, q, a, table) + c_of(q, a);
  for (const auto& chi : nonprincipal_characters(q)) {
    const ZeroList& list = zeros.at(chi.discriminant());
    if (height > list.height) {
      throw DomainError("reconstruction_residual: " + list.label() + " only reaches T=" + std::to_string(list.height));
    }
    const std::span<const double> used(list.zeros.data(), list.count_up_to(height));
    residual += chi(a) * e_chi_sum(static_cast<double>(x), used);
  }
  return residual;
}

CrossingRecord crossings(std::int64_t q, std::int64_t a, std::int64_t b, std::uint64_t limit,
                         const SieveOptions& sieve) {
  const std::int64_t pair[] = {a, b};
  const Contestants c = make_contestants(q, pair);
  CrossingRecord record{q, c.residues[0], c.residues[1], limit, {}};
  std::int64_t diff = 0;
  int leader = 0;
  const auto uq = static_cast<std::uint64_t>(q);
  for_each_prime(
      limit,
      [&](std::uint64_t p) {
        const int s = c.slot[p % uq];
        if (s < 0) return;
        diff += s == 0 ? 1 : -1;
        const int now = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
        if (now != 0 && now != leader) {
          record.events.push_back({p, now});
          leader = now;
        }
      },
      sieve);
  return record;
}

std::optional<std::uint64_t> first_crossing(std::int64_t q, std::int64_t a, std::int64_t b, std::uint64_t limit,
                                            const SieveOptions& sieve) {
  const std::int64_t pair[] = {a, b};
  const Contestants c = make_contestants(q, pair);
  const auto uq = static_cast<std::uint64_t>(q);
  std::int64_t diff = 0;
  std::optional<std::uint64_t> found;
  for_each_prime(
      limit,
      [&](std::uint64_t p) {
        const int s = c.slot[p % uq];
        if (s < 0) return;
        diff += s == 0 ? 1 : -1;
        if (diff > 0) {
          found = p;
          throw StopSieve{};
        }
      },
      sieve);
  return found;
}

LogDensity log_density(std::int64_t q, std::span<const std::int64_t> ordering, std::uint64_t limit, double k,
                       const SieveOptions& sieve) {
  if (!(k > -1.0)) throw DomainError("log_density: weight exponent k must exceed -1");
  if (ordering.empty()) throw DomainError("log_density: empty ordering");
  if (limit < 2) throw DomainError("log_density: limit must be at least 2");
  const Contestants c = make_contestants(q, ordering);
  const std::size_t r = c.residues.size();
  const auto uq = static_cast<std::uint64_t>(q);

  enum State { in_order = 0, tied = 1, other = 2 };
  std::vector<std::uint64_t> counts(r, 0);
  const auto classify = [&] {
    bool strict = true;
    for (std::size_t i = 0; i + 1 < r; ++i) strict = strict && counts[i] > counts[i + 1];
    if (strict) return in_order;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        if (counts[i] == counts[j]) return tied;
      }
    }
    return other;
  };
  const auto weight = [&](double t) { return std::pow(std::log(t), k + 1.0); };

  CompensatedSum bucket[3];
  State state = classify();
  double run_start = 1.0;
  for_each_prime(
      limit,
      [&](std::uint64_t p) {
        const int s = c.slot[p % uq];
        if (s < 0) return;
        ++counts[s];
        const State next = classify();
        if (next == state) return;
        const double t = static_cast<double>(p);
        if (t > run_start) bucket[state] += weight(t) - weight(run_start);
        run_start = t;
        state = next;
      },
      sieve);
  bucket[state] += weight(static_cast<double>(limit)) - weight(run_start);

  CompensatedSum total;
  for (const auto& b : bucket) total += b.value();
  LogDensity out;
  out.measure = total.value();
  out.value = bucket[in_order].value() / out.measure;
  out.ties = bucket[tied].value() / out.measure;
  return out;
}

GapTrace gap_trace(std::int64_t q, std::span<const std::int64_t> residues, std::uint64_t limit,
                   std::size_t max_ties, const SieveOptions& sieve) {
  if (residues.size() < 2) throw DomainError("gap_trace: need at least two residues");
  const Contestants c = make_contestants(q, residues);
  GapTrace trace;
  trace.q = q;
  trace.residues = c.residues;
  trace.limit = limit;
  const auto uq = static_cast<std::uint64_t>(q);
  std::vector<std::uint64_t> counts(c.residues.size(), 0);
  std::uint64_t min_gap = std::numeric_limits<std::uint64_t>::max();
  double min_normalized = std::numeric_limits<double>::infinity();
  for_each_prime(
      limit,
      [&](std::uint64_t p) {
        const int s = c.slot[p % uq];
        if (s < 0) return;
        ++counts[s];
        const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
        const std::uint64_t gap = *hi - *lo;
        const double x = static_cast<double>(p);
        const double normalized = static_cast<double>(gap) / (std::sqrt(x) / std::log(x));
        if (gap < min_gap) {
          min_gap = gap;
          trace.raw_minima.push_back({p, gap, normalized});
        }
        if (normalized < min_normalized) {
          min_normalized = normalized;
          trace.normalized_minima.push_back({p, gap, normalized});
        }
        if (gap == 0) {
          ++trace.tie_count;
          if (trace.ties.size() < max_ties) trace.ties.push_back(p);
        }
      },
      sieve);
  return trace;
}

std::optional<std::uint64_t> first_rank_reached(std::int64_t q, std::int64_t a, std::span<const std::int64_t> rivals,
                                                unsigned rank, std::uint64_t limit, const SieveOptions& sieve) {
  std::vector<std::int64_t> all{a};
  all.insert(all.end(), rivals.begin(), rivals.end());
  const Contestants c = make_contestants(q, all);
  const std::size_t n = c.residues.size();
  if (rank == 0 || rank > n) throw DomainError("first_rank_reached: rank must lie in [1, contestants]");
  const std::size_t needed = n - rank;  // rivals strictly beaten
  const auto uq = static_cast<std::uint64_t>(q);
  std::vector<std::uint64_t> counts(n, 0);
  std::optional<std::uint64_t> found;
  const auto beaten = [&] {
    std::size_t m = 0;
    for (std::size_t i = 1; i < n; ++i) m += counts[0] > counts[i] ? 1 : 0;
    return m;
  };
  if (needed == 0) return 2;
  for_each_prime(
      limit,
      [&](std::uint64_t p) {
        const int s = c.slot[p % uq];
        if (s < 0) return;
        ++counts[s];
        if (s == 0 && beaten() >= needed) {
          found = p;
          throw StopSieve{};
        }
      },
      sieve);
  return found;
}

}  // namespace primerace
