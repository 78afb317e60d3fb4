#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace primerace {

/// Largest accepted sieve limit; well past the 10^10 desk-scale range so the
/// opt-in extreme races remain reachable.
inline constexpr std::uint64_t kMaxSieveLimit = 10'000'000'000'000ULL;

struct SieveOptions {
  std::size_t segment_size = std::size_t{1} << 19;  // integers per segment
  unsigned workers = 1;
};

/// Thrown by a sink to end a sieve early; sieve_primes swallows it.
struct StopSieve {};

/// Delivers all primes <= limit in increasing order, one span per segment.
/// Segments are sieved in parallel batches and handed to the sink in order.
void sieve_primes(std::uint64_t limit, const std::function<void(std::span<const std::uint64_t>)>& sink,
                  const SieveOptions& options = {});

template <typename Fn>
void for_each_prime(std::uint64_t limit, Fn&& fn, const SieveOptions& options = {}) {
  sieve_primes(
      limit,
      [&fn](std::span<const std::uint64_t> primes) {
        for (const auto p : primes) fn(p);
      },
      options);
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, const SieveOptions& options = {});
std::uint64_t prime_count(std::uint64_t limit, const SieveOptions& options = {});

/// floor(x^(1/k)) computed exactly.
std::uint64_t integer_root(std::uint64_t x, unsigned k);

}  // namespace primerace
