#include "hasse/search.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "hasse/errors.hpp"
#include "hasse/kernels.hpp"

namespace hasse {

const char* strategy_name(SearchStrategy s) {
  return s == SearchStrategy::greedy ? "greedy" : "minimal-largest";
}

SearchStrategy parse_strategy(const std::string& s) {
  if (s == "greedy") return SearchStrategy::greedy;
  if (s == "minimal-largest") return SearchStrategy::minimal_largest;
  throw ParameterError("unknown search strategy '" + s + "' (expected greedy or minimal-largest)");
}

void validate(const SearchParams& params) {
  require_odd_prime_exponent(params.p);
  constexpr std::int64_t kMax = std::int64_t{1} << 59;
  if (params.u == 0 || params.v == 0) throw ParameterError("u and v must be nonzero");
  if (params.u >= kMax || params.u <= -kMax || params.v >= kMax || params.v <= -kMax)
    throw ParameterError("|u| and |v| must be below 2^59");
  if (params.u % 3 == 0) throw ParameterError("3 divides u = " + std::to_string(params.u));
  if (params.v % 3 == 0) throw ParameterError("3 divides v = " + std::to_string(params.v));
  if (params.u == 3 * params.v) throw ParameterError("singular curve: u = 3v makes e1 = e2");
  if (params.limit < params.start) throw ParameterError("limit is below start");
}

std::vector<Prime> build_ramified_set(std::uint32_t p, std::int64_t u, std::int64_t v) {
  SearchParams probe;
  probe.p = p;
  probe.u = u;
  probe.v = v;
  validate(probe);
  Factored n = Factored::of_integer(3) * Factored::of_integer(static_cast<std::int64_t>(p)) *
               Factored::of_integer(u) * Factored::of_integer(v) * Factored::of_integer(u - 3 * v);
  std::vector<Prime> out;
  for (const auto& kv : n.exponents()) out.push_back(kv.first);
  return out;
}

namespace {

int symbol_of_prime(Prime numerator, Prime place, std::uint32_t p) {
  return residue_symbol(ResidueClass::from_exponents(p, {{numerator, 1}}), LocalPlace::finite(place), p);
}

bool contains(const std::vector<Prime>& v, Prime x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

bool AdmissibilityReport::admissible() const { return first_failure().empty(); }

std::string AdmissibilityReport::first_failure() const {
  const std::string c = std::to_string(candidate);
  if (!prime) return c + " is not prime";
  if (!congruent) return c + " is not 1 mod p";
  if (!outside_ramified) return c + " lies in the ramified set";
  for (const auto& ch : checks) {
    if (!ch.ok()) {
      std::ostringstream os;
      os << "condition (" << ch.condition << "): (" << ch.numerator << "/" << ch.place << ")_p = " << ch.outcome
         << ", expected " << ch.expected;
      return os.str();
    }
  }
  return {};
}

AdmissibilityReport is_admissible(Prime candidate, const std::vector<Prime>& accepted,
                                  const std::vector<Prime>& ramified, std::uint32_t p) {
  require_odd_prime_exponent(p);
  AdmissibilityReport rep;
  rep.candidate = candidate;
  rep.congruent = candidate % p == 1;
  rep.prime = candidate >= 2 && is_prime(candidate);
  rep.outside_ramified = !contains(ramified, candidate);
  if (!rep.prime) return rep;

  for (Prime a : accepted) {
    rep.checks.push_back({1, candidate, a, 1, symbol_of_prime(candidate, a, p)});
    rep.checks.push_back({1, a, candidate, 1, symbol_of_prime(a, candidate, p)});
  }
  for (Prime q : ramified) rep.checks.push_back({2, candidate, q, 1, symbol_of_prime(candidate, q, p)});
  for (Prime q : ramified)
    if (q != 3) rep.checks.push_back({3, q, candidate, 1, symbol_of_prime(q, candidate, p)});
  rep.checks.push_back({4, 3, candidate, -1, symbol_of_prime(3, candidate, p)});
  return rep;
}

std::vector<ConditionCheck> build_evidence(const std::vector<Prime>& primes, const std::vector<Prime>& ramified,
                                           std::uint32_t p) {
  std::vector<ConditionCheck> ev;
  for (Prime a : primes)
    for (Prime b : primes)
      if (a != b) ev.push_back({1, a, b, 1, symbol_of_prime(a, b, p)});
  for (Prime a : primes)
    for (Prime q : ramified) ev.push_back({2, a, q, 1, symbol_of_prime(a, q, p)});
  for (Prime a : primes)
    for (Prime q : ramified)
      if (q != 3) ev.push_back({3, q, a, 1, symbol_of_prime(q, a, p)});
  for (Prime a : primes) ev.push_back({4, 3, a, -1, symbol_of_prime(3, a, p)});
  return ev;
}

BigInt AdmissibleTuple::k() const {
  BigInt k = 1;
  for (Prime q : primes) k *= BigInt(static_cast<unsigned long>(q));
  return k;
}

std::vector<std::string> verify_tuple(const SearchParams& params, const std::vector<Prime>& primes) {
  std::vector<std::string> problems;
  validate(params);
  const auto ramified = build_ramified_set(params.p, params.u, params.v);
  for (std::size_t i = 0; i < primes.size(); ++i)
    if (primes[i] < 2 || !is_prime(primes[i]))
      problems.push_back("p_" + std::to_string(i + 1) + " = " + std::to_string(primes[i]) + " is not prime");
  if (!problems.empty()) return problems;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (i > 0 && primes[i] <= primes[i - 1]) problems.push_back("primes are not strictly increasing");
    std::vector<Prime> others;
    for (std::size_t j = 0; j < primes.size(); ++j)
      if (j != i) others.push_back(primes[j]);
    auto rep = is_admissible(primes[i], others, ramified, params.p);
    if (!rep.admissible()) problems.push_back("p_" + std::to_string(i + 1) + ": " + rep.first_failure());
  }
  return problems;
}

AdmissibleTuple make_tuple(const SearchParams& params, std::vector<Prime> primes) {
  AdmissibleTuple tuple;
  tuple.params = params;
  tuple.params.t = static_cast<std::uint32_t>(primes.size());
  auto problems = verify_tuple(tuple.params, primes);
  if (!problems.empty()) throw ParameterError("tuple is not admissible: " + problems.front());
  tuple.ramified = build_ramified_set(params.p, params.u, params.v);
  tuple.evidence = build_evidence(primes, tuple.ramified, params.p);
  tuple.primes = std::move(primes);
  return tuple;
}

// --- scan -------------------------------------------------------------------

namespace {

/// Raw modular-exponentiation checks used by the scan. Deliberately separate
/// from is_admissible, which re-verifies every accepted tuple afterwards.
class Scanner {
 public:
  Scanner(const SearchParams& params, SearchStats& stats)
      : params_(params), stats_(stats), ramified_(build_ramified_set(params.p, params.u, params.v)) {
    const std::uint64_t p = params.p;
    p2_ = p * p;
    pth_power_mod_p2_.resize(p2_);
    for (std::uint64_t r = 0; r < p2_; ++r) pth_power_mod_p2_[r] = r % p != 0 && pow_mod(r, p - 1, p2_) == 1;
    for (Prime q : ramified_)
      if (q != 3) residue_bases_.push_back(q);
    residue_bases_.push_back(3);
    isa_ = kernels::best_isa();
    stats_.isa = kernels::isa_name(isa_);
  }

  std::vector<Prime> run() {
    if (params_.t == 0) return {};
    const std::uint64_t step = 2 * std::uint64_t{params_.p};
    // c = 1 mod p and odd  <=>  c = 1 mod 2p
    std::uint64_t c = std::max<std::uint64_t>(params_.start, step + 1);
    std::uint64_t rem = (c - 1) % step;
    if (rem != 0) c += step - rem;
    const std::uint64_t hard_stop = std::numeric_limits<std::uint64_t>::max() - step;
    const std::uint64_t limit = std::min(params_.limit, hard_stop);

    std::vector<std::uint64_t> block;
    block.reserve(kBlock);
    for (; c <= limit; c += step) {
      ++stats_.candidates;
      if (!pth_power_mod_p2_[c % p2_]) continue;  // condition (2) at q = p
      block.push_back(c);
      if (block.size() == kBlock) {
        if (process(block)) return result_;
        block.clear();
      }
    }
    if (!block.empty() && process(block)) return result_;
    throw SearchExhausted("search limit " + std::to_string(params_.limit) + " reached: found " +
                              std::to_string(best_found_) + " of " + std::to_string(params_.t) + " primes",
                          best_found_);
  }

 private:
  static constexpr std::size_t kBlock = 4096;

  bool process(const std::vector<std::uint64_t>& block) {
    std::vector<std::uint32_t> small;
    std::vector<std::uint64_t> large;
    for (std::uint64_t c : block) {
      if (c <= std::numeric_limits<std::uint32_t>::max())
        small.push_back(static_cast<std::uint32_t>(c));
      else
        large.push_back(c);
    }
    for (std::uint64_t c : filter_small(small))
      if (on_candidate(c)) return true;
    for (std::uint64_t c : large) {
      if (!is_prime(c) || contains(ramified_, c)) continue;
      ++stats_.probable;
      bool ok = true;
      for (Prime q : residue_bases_) {
        bool residue = pow_mod(q % c, (c - 1) / params_.p, c) == 1;
        if (residue == (q == 3)) {
          ok = false;
          break;
        }
      }
      if (ok && on_candidate(c)) return true;
    }
    return false;
  }

  /// Primality plus conditions (3) and (4), vectorized over the block.
  std::vector<std::uint64_t> filter_small(std::vector<std::uint32_t> cand) {
    std::vector<std::uint8_t> flags(cand.size());
    kernels::is_prime_batch(cand, flags, isa_);
    std::vector<std::uint32_t> keep;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (flags[i] && !contains(ramified_, cand[i])) keep.push_back(cand[i]);
    stats_.probable += keep.size();

    std::vector<std::uint32_t> base, exponent, out;
    for (Prime q : residue_bases_) {
      if (keep.empty()) break;
      base.resize(keep.size());
      exponent.resize(keep.size());
      out.resize(keep.size());
      for (std::size_t i = 0; i < keep.size(); ++i) {
        base[i] = static_cast<std::uint32_t>(q % keep[i]);
        exponent[i] = (keep[i] - 1) / params_.p;
      }
      kernels::pow_mod_batch(base, exponent, keep, out, isa_);
      const bool want_residue = q != 3;
      std::size_t w = 0;
      for (std::size_t i = 0; i < keep.size(); ++i)
        if ((out[i] == 1) == want_residue) keep[w++] = keep[i];
      keep.resize(w);
    }
    return {keep.begin(), keep.end()};
  }

  /// Remaining condition (2) places, then the strategy step.
  bool on_candidate(std::uint64_t c) {
    for (Prime q : ramified_) {
      if (q == params_.p) continue;  // handled by the mod p^2 table
      const std::uint64_t e = (q - 1) / gcd_u64(params_.p, q - 1);
      if (pow_mod(c % q, e, q) != 1) return false;
    }
    ++stats_.singletons;
    return params_.strategy == SearchStrategy::greedy ? greedy_step(c) : minimal_largest_step(c);
  }

  bool compatible(std::uint64_t a, std::uint64_t c) const {
    const std::uint32_t p = params_.p;
    return pow_mod(a % c, (c - 1) / p, c) == 1 && pow_mod(c % a, (a - 1) / p, a) == 1;
  }

  bool greedy_step(std::uint64_t c) {
    for (std::uint64_t a : result_)
      if (!compatible(a, c)) return false;
    result_.push_back(c);
    best_found_ = result_.size();
    return result_.size() == params_.t;
  }

  bool minimal_largest_step(std::uint64_t c) {
    std::vector<std::size_t> neighbours;
    for (std::size_t j = 0; j < singletons_.size(); ++j)
      if (compatible(singletons_[j], c)) neighbours.push_back(j);
    const std::size_t index = singletons_.size();
    singletons_.push_back(c);
    adjacency_.push_back(neighbours);

    std::vector<std::size_t> clique;
    if (extend_clique(neighbours, 0, clique)) {
      for (std::size_t j : clique) result_.push_back(singletons_[j]);
      result_.push_back(singletons_[index]);
      return true;
    }
    return false;
  }

  /// Lexicographically first (t-1)-clique drawn from `pool` (ascending indices).
  bool extend_clique(const std::vector<std::size_t>& pool, std::size_t from, std::vector<std::size_t>& clique) {
    best_found_ = std::max<std::size_t>(best_found_, clique.size() + 1);
    if (clique.size() + 1 == params_.t) return true;
    for (std::size_t i = from; i < pool.size(); ++i) {
      const std::size_t j = pool[i];
      bool ok = true;
      for (std::size_t member : clique) {
        const auto& adj = adjacency_[j];
        if (!std::binary_search(adj.begin(), adj.end(), member)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      clique.push_back(j);
      if (extend_clique(pool, i + 1, clique)) return true;
      clique.pop_back();
    }
    return false;
  }

  const SearchParams& params_;
  SearchStats& stats_;
  std::vector<Prime> ramified_;
  std::vector<Prime> residue_bases_;
  std::uint64_t p2_ = 0;
  std::vector<bool> pth_power_mod_p2_;
  kernels::Isa isa_ = kernels::Isa::scalar;

  std::vector<std::uint64_t> result_;
  std::size_t best_found_ = 0;
  std::vector<std::uint64_t> singletons_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

}  // namespace

AdmissibleTuple search_tuple(const SearchParams& params, SearchStats* stats) {
  validate(params);
  SearchStats local;
  SearchStats& s = stats != nullptr ? *stats : local;
  Scanner scanner(params, s);
  std::vector<Prime> primes = scanner.run();
  std::sort(primes.begin(), primes.end());

  auto problems = verify_tuple(params, primes);
  if (!problems.empty())
    throw std::logic_error("search produced a tuple that fails re-verification: " + problems.front());
  AdmissibleTuple tuple;
  tuple.params = params;
  tuple.primes = std::move(primes);
  tuple.ramified = build_ramified_set(params.p, params.u, params.v);
  tuple.evidence = build_evidence(tuple.primes, tuple.ramified, params.p);
  return tuple;
}

}  // namespace hasse
