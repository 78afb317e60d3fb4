#include "primerace/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "primerace/errors.hpp"

namespace primerace {

namespace {

// Plain sieve for the base primes up to sqrt(limit).
std::vector<std::uint32_t> base_primes(std::uint64_t bound) {
  std::vector<char> composite(bound + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = 1;
  }
  return out;
}

// Odd primes in [lo, hi), lo odd.
std::vector<std::uint64_t> sieve_segment(std::uint64_t lo, std::uint64_t hi, std::span<const std::uint32_t> base) {
  const std::size_t n = static_cast<std::size_t>((hi - lo + 1) / 2);  // odd numbers lo, lo+2, ...
  std::vector<char> composite(n, 0);
  for (const std::uint64_t p : base) {
    if (p == 2) continue;
    if (p * p >= hi) break;
    std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
    if (start % 2 == 0) start += p;
    for (std::uint64_t m = start; m < hi; m += 2 * p) composite[(m - lo) / 2] = 1;
  }
  std::vector<std::uint64_t> primes;
  primes.reserve(n / 8 + 16);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t v = lo + 2 * i;
    if (v >= hi) break;
    if (!composite[i] && v > 1) primes.push_back(v);
  }
  return primes;
}

}  // namespace

std::uint64_t integer_root(std::uint64_t x, unsigned k) {
  if (k == 0) throw DomainError("integer_root: k must be positive");
  if (k == 1 || x < 2) return x;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(x), 1.0L / k));
  const auto pow_le = [&](std::uint64_t base) {
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
      acc *= base;
      if (acc > x) return false;
    }
    return true;
  };
  while (r > 0 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

namespace {

void sieve_all(std::uint64_t limit, const std::function<void(std::span<const std::uint64_t>)>& sink,
               const SieveOptions& options) {
  if (limit > kMaxSieveLimit) {
    throw DomainError("sieve_primes: limit " + std::to_string(limit) + " exceeds the supported maximum " +
                      std::to_string(kMaxSieveLimit));
  }
  if (limit < 2) return;
  const std::uint64_t two = 2;
  sink(std::span<const std::uint64_t>(&two, 1));
  if (limit < 3) return;

  const auto base = base_primes(integer_root(limit, 2));
  const std::uint64_t segment = std::max<std::uint64_t>(options.segment_size & ~std::uint64_t{1}, 1024);
  const std::uint64_t end = limit + 1;
  const unsigned workers = std::max(1u, options.workers);

  std::uint64_t lo = 3;
  while (lo < end) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> batch;
    for (unsigned w = 0; w < workers && lo < end; ++w) {
      const std::uint64_t hi = std::min(end, lo + segment);
      batch.emplace_back(lo, hi);
      lo = hi % 2 == 0 ? hi + 1 : hi;
    }
    if (workers == 1) {
      const auto primes = sieve_segment(batch[0].first, batch[0].second, base);
      sink(primes);
      continue;
    }
    std::vector<std::future<std::vector<std::uint64_t>>> pending;
    pending.reserve(batch.size());
    for (const auto& [a, b] : batch) {
      pending.push_back(std::async(std::launch::async, [a = a, b = b, &base] { return sieve_segment(a, b, base); }));
    }
    for (auto& f : pending) sink(f.get());
  }
}

}  // namespace

void sieve_primes(std::uint64_t limit, const std::function<void(std::span<const std::uint64_t>)>& sink,
                  const SieveOptions& options) {
  try {
    sieve_all(limit, sink, options);
  } catch (const StopSieve&) {
  }
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, const SieveOptions& options) {
  std::vector<std::uint64_t> out;
  sieve_primes(limit, [&](std::span<const std::uint64_t> ps) { out.insert(out.end(), ps.begin(), ps.end()); },
               options);
  return out;
}

std::uint64_t prime_count(std::uint64_t limit, const SieveOptions& options) {
  std::uint64_t n = 0;
  sieve_primes(limit, [&](std::span<const std::uint64_t> ps) { n += ps.size(); }, options);
  return n;
}

}  // namespace primerace
