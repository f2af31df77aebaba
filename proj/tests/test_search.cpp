#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "hasse/errors.hpp"
#include "hasse/search.hpp"
#include "oracles.hpp"

using namespace hasse;

namespace {

// Brute-force reference scanner: trial-division primality, symbols by direct exponentiation.
struct Reference {
  std::uint64_t p;
  std::vector<std::uint64_t> ramified;

  int symbol(std::uint64_t q, std::uint64_t ell) const {
    if (ell == p) return oracle::powmod(q, p - 1, p * p) == 1 ? 1 : -1;
    if ((ell - 1) % p) return 1;
    return oracle::powmod(q, (ell - 1) / p, ell) == 1 ? 1 : -1;
  }
  bool singleton(std::uint64_t c) const {
    if (c % p != 1 || !oracle::is_prime(c)) return false;
    if (std::find(ramified.begin(), ramified.end(), c) != ramified.end()) return false;
    for (auto q : ramified) {
      if (symbol(c, q) != 1) return false;
      if (q != 3 && symbol(q, c) != 1) return false;
    }
    return symbol(3, c) == -1;
  }
  bool compatible(std::uint64_t a, std::uint64_t b) const { return symbol(a, b) == 1 && symbol(b, a) == 1; }
  std::vector<std::uint64_t> singletons(std::uint64_t limit) const {
    std::vector<std::uint64_t> s;
    for (std::uint64_t c = p + 1; c <= limit; c += p)
      if (singleton(c)) s.push_back(c);
    return s;
  }
  std::vector<std::uint64_t> greedy(std::uint64_t limit, std::size_t t) const {
    std::vector<std::uint64_t> acc;
    for (auto c : singletons(limit)) {
      if (std::all_of(acc.begin(), acc.end(), [&](auto a) { return compatible(a, c); })) acc.push_back(c);
      if (acc.size() == t) break;
    }
    return acc;
  }
  // Smallest largest element; among those, lexicographically smallest (t <= 3).
  std::vector<std::uint64_t> minimal_largest(std::uint64_t limit, std::size_t t) const {
    const auto s = singletons(limit);
    for (std::size_t z = 0; z < s.size(); ++z) {
      if (t == 1) return {s[z]};
      for (std::size_t x = 0; x < z; ++x) {
        if (!compatible(s[x], s[z])) continue;
        if (t == 2) return {s[x], s[z]};
        for (std::size_t y = x + 1; y < z; ++y)
          if (compatible(s[y], s[z]) && compatible(s[x], s[y])) return {s[x], s[y], s[z]};
      }
    }
    return {};
  }
};

SearchParams params(std::uint32_t p, std::int64_t u, std::int64_t v, std::uint32_t t) {
  SearchParams s;
  s.p = p;
  s.u = u;
  s.v = v;
  s.t = t;
  return s;
}

}  // namespace

TEST_CASE("build_ramified_set") {
  CHECK(build_ramified_set(29, 1, -1) == std::vector<Prime>{2, 3, 29});
  CHECK(build_ramified_set(5, 1, 1) == std::vector<Prime>{2, 3, 5});
  CHECK(build_ramified_set(7, 5, 11) == std::vector<Prime>{2, 3, 5, 7, 11});  // u - 3v = -28
  CHECK_THROWS_AS(validate(params(5, 3, 1, 1)), ParameterError);
  CHECK_THROWS_AS(validate(params(5, 1, 6, 1)), ParameterError);
  CHECK_THROWS_AS(validate(params(4, 1, 1, 1)), ParameterError);
  CHECK_THROWS_AS(validate(params(3, 1, 1, 1)), ParameterError);
  CHECK_THROWS_AS(validate(params(5, 0, 1, 1)), ParameterError);
  auto bad = params(5, 1, 1, 1);
  bad.start = 100;
  bad.limit = 50;
  CHECK_THROWS_AS(validate(bad), ParameterError);
}

TEST_CASE("is_admissible: the p = 29 pair and a congruence failure") {
  const std::vector<Prime> U{2, 3, 29};
  const auto r1 = is_admissible(386029093, {}, U, 29);
  CHECK(r1.admissible());
  CHECK(r1.first_failure().empty());
  const auto r2 = is_admissible(545622299, {386029093}, U, 29);
  CHECK(r2.admissible());
  const bool mutual = std::any_of(r2.checks.begin(), r2.checks.end(), [](const ConditionCheck& c) {
    return c.condition == 1 && c.numerator == 386029093 && c.place == 545622299;
  });
  CHECK(mutual);
  const auto r3 = is_admissible(386029095, {}, U, 29);
  CHECK_FALSE(r3.admissible());
  CHECK_FALSE(r3.congruent);
  CHECK_FALSE(is_admissible(7, {}, {2, 3, 5}, 5).admissible());
}

TEST_CASE("search_tuple: smallest singleton for (5, 1, 1) matches the reference scan") {
  const Reference ref{5, {2, 3, 5}};
  const auto want = ref.minimal_largest(5000, 1);
  REQUIRE(want.size() == 1);
  CHECK(want[0] == 251);
  const auto got = search_tuple(params(5, 1, 1, 1));
  CHECK(got.primes == std::vector<Prime>{want[0]});
  CHECK(got.ramified == std::vector<Prime>{2, 3, 5});
}

TEST_CASE("search_tuple: minimal-largest and greedy strategies against the reference") {
  for (std::uint32_t p : {5u, 7u}) {
    const Reference ref{p, build_ramified_set(p, 1, -1)};
    for (std::uint32_t t : {2u, 3u}) {
      auto sp = params(p, 1, -1, t);
      const auto want = ref.minimal_largest(1'500'000, t);
      REQUIRE(want.size() == t);
      CHECK(search_tuple(sp).primes == std::vector<Prime>(want.begin(), want.end()));
    }
  }
  const Reference ref5{5, {2, 3, 5}};
  auto sp = params(5, 1, -1, 3);
  sp.strategy = SearchStrategy::greedy;
  const auto want = ref5.greedy(7'000'000, 3);
  CHECK(want == std::vector<std::uint64_t>{251, 61001, 6100351});
  CHECK(search_tuple(sp).primes == std::vector<Prime>(want.begin(), want.end()));
}

TEST_CASE("search_tuple: t = 0, exhaustion, determinism, start offset") {
  CHECK(search_tuple(params(5, 1, -1, 0)).primes.empty());
  auto sp = params(5, 1, -1, 3);
  sp.limit = 1000;
  try {
    search_tuple(sp);
    FAIL("expected exhaustion");
  } catch (const SearchExhausted& e) {
    CHECK(e.found() <= 1);
  }
  auto a = params(7, 2, 1, 2);
  CHECK(search_tuple(a).primes == search_tuple(a).primes);
  auto s = params(5, 1, 1, 1);
  s.start = 252;
  const Reference ref{5, {2, 3, 5}};
  const auto all = ref.singletons(100000);
  CHECK(search_tuple(s).primes.front() == all.at(1));
}

TEST_CASE("property: every searched tuple re-verifies and carries complete evidence") {
  std::mt19937 rng(555);
  const std::int64_t choices[] = {1, -1, 2, -2};
  int checked = 0;
  while (checked < 12) {
    const std::uint32_t p = rng() % 2 ? 5 : 7;
    const std::int64_t u = choices[rng() % 4], v = choices[rng() % 4];
    if (u == 3 * v) continue;
    auto sp = params(p, u, v, 1 + rng() % 2);
    sp.limit = 50'000'000;
    const auto tuple = search_tuple(sp);
    CHECK(verify_tuple(sp, tuple.primes).empty());
    const std::size_t t = tuple.primes.size();
    std::size_t u3 = 0;
    for (Prime q : tuple.ramified) u3 += q != 3;
    CHECK(tuple.evidence.size() == t * (t - 1) + t * tuple.ramified.size() + t * u3 + t);
    for (const auto& c : tuple.evidence) CHECK(c.ok());
    for (Prime r : tuple.primes) {
      CHECK(r % p == 1);
      const Reference ref{p, tuple.ramified};
      CHECK(ref.singleton(r));
    }
    ++checked;
  }
}

TEST_CASE("verify_tuple and make_tuple reject non-admissible primes") {
  const auto sp = params(29, 1, -1, 2);
  CHECK(verify_tuple(sp, {386029093, 545622299}).empty());
  CHECK_FALSE(verify_tuple(sp, {386029093, 386029093 + 29 * 2}).empty());
  CHECK_THROWS_AS(make_tuple(sp, {386029093, 13}), ParameterError);
  CHECK(make_tuple(sp, {386029093, 545622299}).k() == BigInt("210626081203544807"));
}
