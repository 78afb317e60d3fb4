#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace primerace {

/// Kronecker symbol (a/n) for arbitrary integers, no validation.
int kronecker_symbol(std::int64_t a, std::int64_t n) noexcept;

/// True for fundamental discriminants: D = 1 mod 4 squarefree, or D = 4m with
/// m = 2, 3 mod 4 squarefree. D = 1 is excluded.
bool is_fundamental_discriminant(std::int64_t d) noexcept;

/// Kronecker symbol (D/n) restricted to fundamental discriminants D (and the
/// degenerate D = 1, -1). Throws DomainError otherwise.
int kronecker(std::int64_t d, std::int64_t n);

std::int64_t gcd(std::int64_t a, std::int64_t b) noexcept;
std::int64_t euler_phi(std::int64_t n);

/// Real Dirichlet character chi_D taken modulo q, where |D| divides q.
///
/// Values at residues sharing a factor with q are 0 even when the residue is
/// coprime to |D|; the primitive character is recovered with primitive().
class Character {
 public:
  Character(std::int64_t discriminant, std::int64_t modulus);

  std::int64_t discriminant() const noexcept { return discriminant_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  std::int64_t conductor() const noexcept { return discriminant_ < 0 ? -discriminant_ : discriminant_; }
  bool is_even() const noexcept { return even_; }
  bool is_odd() const noexcept { return !even_; }
  /// 0 for even characters, 1 for odd ones; the shift in the gamma factor.
  int parity_bit() const noexcept { return even_ ? 0 : 1; }
  bool is_primitive() const noexcept { return modulus_ == conductor(); }

  /// chi(n) for any integer n.
  int operator()(std::int64_t n) const noexcept;
  const std::vector<std::int8_t>& values() const noexcept { return values_; }

  Character primitive() const { return Character(discriminant_, conductor()); }

  /// "chi_-8", "chi_12", ...
  std::string label() const;

  friend bool operator==(const Character& a, const Character& b) noexcept {
    return a.discriminant_ == b.discriminant_ && a.modulus_ == b.modulus_;
  }

 private:
  std::int64_t discriminant_;
  std::int64_t modulus_;
  bool even_;
  std::vector<std::int8_t> values_;
};

/// Parses "chi_-4" (or a bare "-4") into the primitive character chi_D.
Character character_from_label(std::string_view label);

/// Every a coprime to q satisfies a^2 = 1 mod q.
bool has_exponent_two(std::int64_t q);

/// q outside {3, 4, 8, 12}; accepted but flagged in reports.
bool is_experimental_modulus(std::int64_t q) noexcept;

/// All nonprincipal real characters mod q, sorted by discriminant.
/// Throws DomainError when the reduced residue group mod q has exponent > 2,
/// since complex characters then exist and the list would be incomplete.
std::vector<Character> nonprincipal_characters(std::int64_t q);

/// (number of b in [1, q] with b^2 = a mod q) - 1.
int c_of(std::int64_t q, std::int64_t a);

std::vector<std::int64_t> reduced_residues(std::int64_t q);
bool is_square_residue(std::int64_t q, std::int64_t a);

/// For a nonsquare a modulo an exponent-two group with exactly three
/// nonprincipal characters (q = 8, 12 and the like), the unique nonprincipal
/// character with chi(a) = +1.
Character selector_character(std::int64_t q, std::int64_t a);

}  // namespace primerace
