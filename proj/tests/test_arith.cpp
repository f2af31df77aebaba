#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>

#include "hasse/arith.hpp"
#include "hasse/errors.hpp"
#include "oracles.hpp"

using namespace hasse;

namespace {

ResidueClass cls(std::uint32_t p, std::map<Prime, long long> e) { return ResidueClass::from_exponents(p, e); }

}  // namespace

TEST_CASE("canonicalize: identity, sign absorption, exponent reduction") {
  CHECK(canonicalize(1, 1, 5).is_identity());
  CHECK(canonicalize(-3, 1, 5) == cls(5, {{3, 1}}));
  // 3^-3: the multiples 3^(5m-3) for m = 0..3 have exponents -3, 2, 7, 12; the one in [0, 4] is 2.
  long long reduced = -1;
  for (long long m = 0; m < 4; ++m)
    if (5 * m - 3 >= 0 && 5 * m - 3 < 5) reduced = 5 * m - 3;
  CHECK(reduced == 2);
  CHECK(canonicalize(1, 27, 5) == cls(5, {{3, reduced}}));
  CHECK(canonicalize(1, 27, 5).to_string() == "3^2");
  CHECK(canonicalize(-32, 1, 5).is_identity());
  CHECK_THROWS_AS(canonicalize(0, 1, 5), DomainError);
  CHECK_THROWS_AS(canonicalize(1, 0, 5), DomainError);
}

TEST_CASE("canonicalize is a homomorphism") {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<long long> d(-5000, 5000);
  for (std::uint32_t p : {5u, 7u, 13u}) {
    for (int i = 0; i < 300; ++i) {
      long long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
      if (a == 0 || b == 0 || c == 0 || e == 0) continue;
      const auto lhs = canonicalize(Factored::of_integer(a * c) * Factored::of_integer(b * e).inverse(), p);
      CHECK(lhs == canonicalize(a, b, p) * canonicalize(c, e, p));
    }
  }
}

TEST_CASE("ResidueClass invariants") {
  const auto q = cls(7, {{2, 9}, {3, -1}, {5, 14}});
  CHECK(q.exponent(2) == 2);
  CHECK(q.exponent(3) == 6);
  CHECK(q.exponent(5) == 0);
  for (const auto& [r, e] : q.factors()) CHECK((e >= 1 && e <= 6));
  CHECK((q * q.inverse()).is_identity());
  CHECK(q.pow(7).is_identity());
  CHECK(q.representative() == BigInt(4 * 729));
  CHECK(cls(5, {{11, 5}}).is_identity());
}

TEST_CASE("residue_symbol examples") {
  // fifth powers mod 11 by enumeration
  CHECK(oracle::pth_powers(5, 11) == std::set<std::uint64_t>{1, 10});
  CHECK(residue_symbol(cls(5, {{2, 1}}), LocalPlace::finite(11), 5) == -1);
  for (Prime ell : {2ull, 11ull, 31ull, 386029093ull})
    CHECK(residue_symbol(cls(29, {{ell, 29}}), LocalPlace::finite(ell), 29) == 1);
  CHECK(residue_symbol(cls(29, {{3, 1}}), LocalPlace::finite(386029093), 29) == -1);
  CHECK(oracle::powmod(3, (386029093 - 1) / 29, 386029093) != 1);
  CHECK(residue_symbol(cls(5, {{3, 2}, {7, 1}}), LocalPlace::archimedean(), 5) == 1);
}

TEST_CASE("residue_symbol agrees with enumeration on a slice") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long long> d(1, 120);
  for (std::uint32_t p : {5u, 7u, 11u})
    for (Prime ell = 2; ell <= 131; ++ell) {
      if (!oracle::is_prime(ell)) continue;
      for (int i = 0; i < 40; ++i) {
        const long long a = d(rng), b = d(rng);
        const int want = oracle::is_local_pth_power(a, b, ell, p) ? 1 : -1;
        CHECK_MESSAGE(residue_symbol(canonicalize(a, b, p), LocalPlace::finite(ell), p) == want,
                      a << "/" << b << " at " << ell << " p=" << p);
      }
    }
}

TEST_CASE("is_prime") {
  CHECK(is_prime(std::uint64_t{29}));
  CHECK(is_prime(std::uint64_t{386029093}));
  CHECK_FALSE(is_prime(std::uint64_t{561}));
  CHECK(is_prime(std::uint64_t{2305843009213693951ull}));   // 2^61 - 1
  CHECK_FALSE(is_prime(std::uint64_t{3215031751ull}));      // strong pseudoprime to 2, 3, 5, 7
  CHECK_FALSE(is_prime(std::uint64_t{3825123056546413051ull}));
  CHECK(is_prime(BigInt("170141183460469231731687303715884105727")));  // 2^127 - 1
  CHECK_FALSE(is_prime(BigInt("170141183460469231731687303715884105729")));
  CHECK_THROWS_AS(is_prime(std::uint64_t{1}), ParameterError);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t n = 2 + rng() % 5'000'000;
    CHECK(is_prime(n) == oracle::is_prime(n));
  }
}

TEST_CASE("factorization") {
  const auto f = Factored::of_integer(-348);
  CHECK(f.sign() == -1);
  CHECK(f.exponents() == std::map<Prime, long long>{{2, 2}, {3, 1}, {29, 1}});
  CHECK(Factored::of_integer(BigInt("386029093")) == Factored::of_prime(386029093));
  FactorOptions tight{100};
  CHECK_THROWS_AS(Factored::of_integer(std::int64_t{1009} * 1013, tight), FactorizationError);
  CHECK(Factored::of_integer(std::int64_t{1009} * 1013).exponents().size() == 2);
}

TEST_CASE("places") {
  CHECK(LocalPlace::archimedean().to_string() == "inf");
  CHECK(LocalPlace::finite(7).prime() == 7);
  CHECK_THROWS_AS(LocalPlace::finite(9), ParameterError);
  CHECK(LocalPlace::archimedean() < LocalPlace::finite(2));
}

TEST_CASE("local_class examples and errors") {
  const Prime p1 = 386029093;
  CHECK(local_class(ResidueClass(29), p1, 29, 3) == LocalClass{29, 0, 0});
  CHECK(local_class(cls(29, {{p1, 1}}), p1, 29, 3) == LocalClass{29, 1, 0});
  CHECK(local_class(cls(29, {{3, 1}}), p1, 29, 3) == LocalClass{29, 0, 1});
  CHECK(local_class(cls(5, {{2, 1}}), 13, 5, 3) == LocalClass{5, 0, 0});  // 5 does not divide 12
  CHECK_THROWS_AS(local_class(cls(5, {{2, 1}}), 5, 5, 3), ParameterError);
  CHECK_THROWS_AS(local_class(cls(5, {{2, 1}}), 11, 5, 10), ParameterError);  // 10 = -1 is a 5th power mod 11
}

TEST_CASE("local_class is a homomorphism and matches a brute discrete log") {
  std::mt19937 rng(3);
  for (std::uint32_t p : {5u, 7u}) {
    for (Prime ell = p + 1; ell < 400; ell += p) {
      if (!oracle::is_prime(ell)) continue;
      Prime g = 2;
      while (oracle::powmod(g, (ell - 1) / p, ell) == 1) ++g;
      const std::uint64_t zeta = oracle::powmod(g, (ell - 1) / p, ell);
      std::uniform_int_distribution<long long> e(-3, 3);
      for (int i = 0; i < 20; ++i) {
        std::map<Prime, long long> ea, eb;
        for (Prime r : std::array<Prime, 6>{2, 3, 5, 7, 11, ell}) {
          ea[r] += e(rng);
          eb[r] += e(rng);
        }
        const auto a = cls(p, ea), b = cls(p, eb);
        CHECK(local_class(a * b, ell, p, g) == local_class(a, ell, p, g) + local_class(b, ell, p, g));
        // brute discrete log: unit part^((ell-1)/p) = zeta^k
        std::uint64_t w = 1;
        for (const auto& [r, x] : a.factors())
          if (r != ell) w = w * oracle::powmod(r, x, ell) % ell;
        const std::uint64_t target = oracle::powmod(w, (ell - 1) / p, ell);
        std::uint32_t k = 0;
        while (oracle::powmod(zeta, k, ell) != target) ++k;
        CHECK(local_class(a, ell, p, g).unit_index == k);
      }
    }
  }
}
