#pragma once

// Search for admissible prime tuples p_1 < ... < p_t:
//   (1) (p_i/p_j)_p = 1 for i != j
//   (2) (p_i/q)_p = 1 for q in U
//   (3) (q/p_i)_p = 1 for q in U \ {3}
//   (4) (3/p_i)_p = -1
// where U is the set of primes dividing 3 p u v (u - 3v).

#include <cstdint>
#include <string>
#include <vector>

#include "hasse/arith.hpp"

namespace hasse {

enum class SearchStrategy {
  /// Commit a tuple as soon as the scan reaches a prime that completes one;
  /// the result minimizes the largest prime, ties broken lexicographically.
  minimal_largest,
  /// Accept every admissible candidate in scan order and never backtrack.
  greedy,
};

const char* strategy_name(SearchStrategy s);
SearchStrategy parse_strategy(const std::string& s);

struct SearchParams {
  std::uint32_t p = 0;
  std::int64_t u = 0;
  std::int64_t v = 0;
  std::uint32_t t = 0;
  std::uint64_t start = 2;
  std::uint64_t limit = 1'000'000'000;
  SearchStrategy strategy = SearchStrategy::minimal_largest;
};

/// Throws ParameterError: p not a prime > 3, u or v zero or divisible by 3,
/// u = 3v (singular curve), |u|, |v| >= 2^59, limit < start.
void validate(const SearchParams& params);

/// The primes dividing 3 p u v (u - 3v), ascending. Always contains 3 and p.
std::vector<Prime> build_ramified_set(std::uint32_t p, std::int64_t u, std::int64_t v);

/// One residue-symbol instance (numerator/place)_p of the four condition families.
struct ConditionCheck {
  int condition = 0;  // 1..4
  Prime numerator = 0;
  Prime place = 0;
  int expected = 1;
  int outcome = 1;

  bool ok() const { return expected == outcome; }
  friend bool operator==(const ConditionCheck&, const ConditionCheck&) = default;
};

struct AdmissibilityReport {
  Prime candidate = 0;
  bool congruent = false;   // candidate = 1 mod p
  bool prime = false;
  bool outside_ramified = false;
  std::vector<ConditionCheck> checks;

  bool admissible() const;
  /// First failing item, or empty.
  std::string first_failure() const;
};

/// Full check of `candidate` against U and the already accepted primes.
AdmissibilityReport is_admissible(Prime candidate, const std::vector<Prime>& accepted,
                                  const std::vector<Prime>& ramified, std::uint32_t p);

/// Every instance of conditions (1)-(4) for the given primes, in a fixed order.
std::vector<ConditionCheck> build_evidence(const std::vector<Prime>& primes, const std::vector<Prime>& ramified,
                                           std::uint32_t p);

struct AdmissibleTuple {
  SearchParams params;
  std::vector<Prime> primes;
  std::vector<Prime> ramified;
  std::vector<ConditionCheck> evidence;

  BigInt k() const;
};

/// Re-derives U and every condition for a claimed tuple; returns problems found
/// (empty when the tuple is admissible).
std::vector<std::string> verify_tuple(const SearchParams& params, const std::vector<Prime>& primes);

/// Assembles a tuple from known primes; throws ParameterError if any check fails.
AdmissibleTuple make_tuple(const SearchParams& params, std::vector<Prime> primes);

struct SearchStats {
  std::uint64_t candidates = 0;  // values = 1 mod p examined
  std::uint64_t probable = 0;    // survivors of the mod p^2 and primality filters
  std::uint64_t singletons = 0;  // primes satisfying (2)-(4)
  const char* isa = "scalar";
};

/// Deterministic scan of candidates = 1 mod p in [start, limit].
/// Throws SearchExhausted when the limit is reached first.
AdmissibleTuple search_tuple(const SearchParams& params, SearchStats* stats = nullptr);

}  // namespace hasse
