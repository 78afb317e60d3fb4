#include "primerace/chars.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <string>
#include <utility>

#include "primerace/errors.hpp"

namespace primerace {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) noexcept {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

bool is_squarefree(std::int64_t n) noexcept {
  n = std::llabs(n);
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

}  // namespace

int kronecker_symbol(std::int64_t a, std::int64_t n) noexcept {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  if (a % 2 == 0 && n % 2 == 0) return 0;

  int k = 1;
  int twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  if (twos % 2 == 1) {
    const std::int64_t r = mod(a, 8);
    if (r == 3 || r == 5) k = -k;
  }
  if (n < 0) {
    n = -n;
    if (a < 0) k = -k;
  }

  // n is now odd and positive: Jacobi symbol of (a mod n / n).
  a = mod(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r = n % 8;
      if (r == 3 || r == 5) k = -k;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) k = -k;
    a %= n;
  }
  return n == 1 ? k : 0;
}

bool is_fundamental_discriminant(std::int64_t d) noexcept {
  if (d == 0 || d == 1) return false;
  const std::int64_t r = mod(d, 4);
  if (r == 1) return is_squarefree(d);
  if (r == 0) {
    const std::int64_t m = d / 4;
    const std::int64_t rm = mod(m, 4);
    return (rm == 2 || rm == 3) && is_squarefree(m);
  }
  return false;
}

int kronecker(std::int64_t d, std::int64_t n) {
  if (d != 1 && d != -1 && !is_fundamental_discriminant(d)) {
    std::string why = "kronecker: D=" + std::to_string(d) + " is not a fundamental discriminant";
    const std::int64_t r = mod(d, 4);
    if (r == 2 || r == 3) {
      why += " (D = 2, 3 mod 4; did you mean " + std::to_string(4 * d) + "?)";
    } else if (d % 4 == 0 && is_fundamental_discriminant(d / 4)) {
      why += " (D/4 = " + std::to_string(d / 4) + " is fundamental)";
    }
    throw DomainError(why);
  }
  return kronecker_symbol(d, n);
}

std::int64_t gcd(std::int64_t a, std::int64_t b) noexcept {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

std::int64_t euler_phi(std::int64_t n) {
  if (n <= 0) throw DomainError("euler_phi: n must be positive");
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

Character::Character(std::int64_t discriminant, std::int64_t modulus)
    : discriminant_(discriminant), modulus_(modulus) {
  if (!is_fundamental_discriminant(discriminant)) {
    throw DomainError("Character: D=" + std::to_string(discriminant) +
                      " is not a fundamental discriminant");
  }
  if (modulus <= 0 || modulus % conductor() != 0) {
    throw DomainError("Character: modulus " + std::to_string(modulus) +
                      " is not a multiple of |D|=" + std::to_string(conductor()));
  }
  values_.resize(static_cast<std::size_t>(modulus_));
  for (std::int64_t a = 0; a < modulus_; ++a) {
    values_[a] = gcd(a, modulus_) == 1 ? static_cast<std::int8_t>(kronecker_symbol(discriminant_, a)) : 0;
  }
  // chi_D(-1) = sign(D)
  even_ = discriminant_ > 0;
}

int Character::operator()(std::int64_t n) const noexcept {
  return values_[static_cast<std::size_t>(mod(n, modulus_))];
}

std::string Character::label() const { return "chi_" + std::to_string(discriminant_); }

Character character_from_label(std::string_view label) {
  std::string_view digits = label;
  if (digits.starts_with("chi_")) digits.remove_prefix(4);
  std::int64_t d = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw DomainError("unrecognised character label '" + std::string(label) + "'");
  }
  return Character(d, d < 0 ? -d : d);
}

bool has_exponent_two(std::int64_t q) {
  if (q <= 0) throw DomainError("modulus must be positive");
  for (std::int64_t a = 1; a < q; ++a) {
    if (gcd(a, q) == 1 && (a * a) % q != 1 % q) return false;
  }
  return true;
}

bool is_experimental_modulus(std::int64_t q) noexcept {
  return !(q == 3 || q == 4 || q == 8 || q == 12);
}

std::vector<Character> nonprincipal_characters(std::int64_t q) {
  if (q < 3) throw DomainError("nonprincipal_characters: modulus must be at least 3");
  if (!has_exponent_two(q)) {
    throw DomainError("modulus " + std::to_string(q) +
                      " has a reduced residue group of exponent > 2; it carries non-real "
                      "characters, which are not supported");
  }
  std::vector<Character> out;
  for (std::int64_t k = 3; k <= q; ++k) {
    if (q % k != 0) continue;
    for (const std::int64_t d : {-k, k}) {
      if (!is_fundamental_discriminant(d)) continue;
      Character chi(d, q);
      const bool duplicate = std::any_of(out.begin(), out.end(),
                                         [&](const Character& c) { return c.values() == chi.values(); });
      if (!duplicate) out.push_back(std::move(chi));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Character& a, const Character& b) { return a.discriminant() < b.discriminant(); });
  if (static_cast<std::int64_t>(out.size()) != euler_phi(q) - 1) {
    throw DomainError("nonprincipal_characters: found " + std::to_string(out.size()) +
                      " real characters mod " + std::to_string(q) + ", expected " +
                      std::to_string(euler_phi(q) - 1));
  }
  return out;
}

int c_of(std::int64_t q, std::int64_t a) {
  if (q <= 0) throw DomainError("c_of: modulus must be positive");
  if (gcd(a, q) != 1) {
    throw DomainError("c_of: residue " + std::to_string(a) + " is not coprime to " + std::to_string(q));
  }
  const std::int64_t target = mod(a, q);
  int roots = 0;
  for (std::int64_t b = 1; b <= q; ++b) {
    if ((b % q) * (b % q) % q == target) ++roots;
  }
  return roots - 1;
}

std::vector<std::int64_t> reduced_residues(std::int64_t q) {
  std::vector<std::int64_t> out;
  for (std::int64_t a = 1; a <= q; ++a) {
    if (gcd(a, q) == 1) out.push_back(a % q);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_square_residue(std::int64_t q, std::int64_t a) { return c_of(q, a) >= 0; }

Character selector_character(std::int64_t q, std::int64_t a) {
  const auto chars = nonprincipal_characters(q);
  if (chars.size() != 3) {
    throw DomainError("selector_character: modulus " + std::to_string(q) +
                      " does not have exactly three nonprincipal characters");
  }
  if (is_square_residue(q, a)) {
    throw DomainError("selector_character: " + std::to_string(a) + " is a square mod " + std::to_string(q));
  }
  const Character* found = nullptr;
  for (const auto& chi : chars) {
    if (chi(a) == 1) {
      if (found != nullptr) throw DomainError("selector_character: selector is not unique");
      found = &chi;
    }
  }
  if (found == nullptr) throw DomainError("selector_character: no character takes +1 at the residue");
  return *found;
}

}  // namespace primerace
