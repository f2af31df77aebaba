#pragma once

// Integer arithmetic, primality, and p-th power classes of Q* over every
// completion Q_l (l <= infinity).
//
// Elements of Q*/Q*^p are stored as ResidueClass: a p-th-power-free positive
// integer given by its factorization. Signs are dropped: for odd p,
// -1 = (-1)^p is a p-th power.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hasse {

using BigInt = mpz_class;
using Prime = std::uint64_t;

// --- word-size modular arithmetic -------------------------------------------

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Reduce a signed integer into [0, p).
inline std::uint32_t mod_p(long long x, std::uint32_t p) {
  long long r = x % static_cast<long long>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// Deterministic for every 64-bit input (Miller-Rabin, first twelve prime bases).
/// Throws ParameterError for n < 2.
bool is_prime(std::uint64_t n);

/// Exact below 2^64; above that GMP's Baillie-PSW + 40 Miller-Rabin rounds
/// (probabilistic, error below 4^-40).
bool is_prime(const BigInt& n);

/// Throws ParameterError unless p is a prime > 3.
void require_odd_prime_exponent(std::uint32_t p);

// --- factored rationals -----------------------------------------------------

struct FactorOptions {
  /// Largest trial divisor. A cofactor left over must be prime or factoring fails.
  std::uint64_t trial_bound = 1'000'000;
};

/// A nonzero rational sign * prod prime^exponent with signed exponents.
class Factored {
 public:
  Factored() = default;

  static Factored of_integer(std::int64_t n, const FactorOptions& opts = {});
  static Factored of_integer(const BigInt& n, const FactorOptions& opts = {});
  static Factored of_prime(Prime q, long long exponent = 1);
  static Factored minus_one();

  int sign() const { return sign_; }
  const std::map<Prime, long long>& exponents() const { return exponents_; }

  Factored& operator*=(const Factored& other);
  friend Factored operator*(Factored a, const Factored& b) { return a *= b; }
  Factored inverse() const;
  Factored pow(long long e) const;

  BigInt numerator() const;
  BigInt denominator() const;

  friend bool operator==(const Factored&, const Factored&) = default;

 private:
  int sign_ = 1;
  std::map<Prime, long long> exponents_;
};

// --- Q*/Q*^p ----------------------------------------------------------------

class ResidueClass {
 public:
  /// The identity class for exponent p.
  explicit ResidueClass(std::uint32_t p);

  /// Builds the canonical class from arbitrary signed exponents.
  static ResidueClass from_exponents(std::uint32_t p, const std::map<Prime, long long>& exps);

  std::uint32_t p() const { return p_; }
  /// prime -> exponent in [1, p-1]; primes with exponent 0 mod p are absent.
  const std::map<Prime, std::uint32_t>& factors() const { return factors_; }
  std::uint32_t exponent(Prime q) const;
  bool is_identity() const { return factors_.empty(); }
  std::vector<Prime> support() const;

  ResidueClass& operator*=(const ResidueClass& other);
  friend ResidueClass operator*(ResidueClass a, const ResidueClass& b) { return a *= b; }
  ResidueClass inverse() const;
  ResidueClass pow(long long e) const;

  /// The p-th-power-free positive integer representing the class.
  BigInt representative() const;
  /// "1", "7", "3^2*5" ...
  std::string to_string() const;

  friend bool operator==(const ResidueClass&, const ResidueClass&) = default;

 private:
  std::uint32_t p_;
  std::map<Prime, std::uint32_t> factors_;
};

/// The unique canonical class of n modulo p-th powers. Group homomorphism.
ResidueClass canonicalize(const Factored& n, std::uint32_t p);
/// Convenience for num/den; throws DomainError on zero.
ResidueClass canonicalize(std::int64_t num, std::int64_t den, std::uint32_t p);

// --- places -----------------------------------------------------------------

class LocalPlace {
 public:
  static LocalPlace archimedean() { return LocalPlace(); }
  /// Throws ParameterError unless ell is prime.
  static LocalPlace finite(Prime ell);

  bool is_archimedean() const { return !prime_.has_value(); }
  Prime prime() const;
  std::string to_string() const;

  friend bool operator==(const LocalPlace&, const LocalPlace&) = default;
  friend auto operator<=>(const LocalPlace&, const LocalPlace&) = default;

 private:
  LocalPlace() = default;
  std::optional<Prime> prime_;
};

/// Coordinates of an element of Q_l^*/Q_l^{*p}: valuation mod p and the
/// discrete log of the unit part against a fixed non-p-th-power generator.
struct LocalClass {
  std::uint32_t p = 0;
  std::uint32_t valuation = 0;
  std::uint32_t unit_index = 0;

  LocalClass& operator+=(const LocalClass& o);
  friend LocalClass operator+(LocalClass a, const LocalClass& b) { return a += b; }
  LocalClass scaled(long long k) const;

  friend bool operator==(const LocalClass&, const LocalClass&) = default;
};

/// (q/l)_p: +1 iff q is a p-th power in the completion at `place`.
int residue_symbol(const ResidueClass& q, const LocalPlace& place, std::uint32_t p);

/// Unit part of q at ell (all factors other than ell) reduced mod m.
std::uint64_t unit_part_mod(const ResidueClass& q, Prime ell, std::uint64_t m);

/// Local coordinates of q at ell. For ell = 1 mod p the unit index is the
/// discrete log base `generator` in the order-p quotient of F_ell^*; when
/// p does not divide ell - 1 the quotient is trivial and the index is 0.
/// Throws ParameterError if ell = p or the generator is a p-th power mod ell.
LocalClass local_class(const ResidueClass& q, Prime ell, std::uint32_t p, std::uint64_t generator);

}  // namespace hasse
