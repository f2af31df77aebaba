#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "hasse/kernels.hpp"
#include "oracles.hpp"

using namespace hasse::kernels;

namespace {

std::vector<Isa> isas() {
  std::vector<Isa> out{Isa::scalar};
  if (isa_available(Isa::avx2)) out.push_back(Isa::avx2);
  return out;
}

std::uint32_t random_odd_modulus(std::mt19937& rng) {
  switch (rng() % 4) {
    case 0:
      return 3 + 2 * (rng() % 50);
    case 1:
      return 0xFFFFFFFFu - 2 * (rng() % 50);
    default:
      return (rng() | 1u) | (rng() % 2 ? 0x80000000u : 0u) | 3u;
  }
}

}  // namespace

TEST_CASE("dispatch reports an available ISA") {
  CHECK(isa_available(Isa::scalar));
  CHECK(isa_available(best_isa()));
  CHECK(std::string(isa_name(Isa::avx2)) == "avx2");
}

TEST_CASE("pow_mod_batch: every ISA equals the 128-bit reference") {
  std::mt19937 rng(1234);
  for (std::size_t len : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
    std::vector<std::uint32_t> b(len), e(len), m(len);
    for (std::size_t i = 0; i < len; ++i) {
      m[i] = random_odd_modulus(rng);
      b[i] = rng();
      e[i] = i % 7 == 0 ? static_cast<std::uint32_t>(i % 3) : rng();
    }
    for (Isa isa : isas()) {
      std::vector<std::uint32_t> out(len);
      pow_mod_batch(b, e, m, out, isa);
      for (std::size_t i = 0; i < len; ++i)
        REQUIRE_MESSAGE(out[i] == oracle::powmod(b[i], e[i], m[i]),
                        isa_name(isa) << " " << b[i] << "^" << e[i] << " mod " << m[i]);
    }
  }
}

TEST_CASE("sprp_batch and is_prime_batch: ISAs agree with each other and with trial division") {
  std::mt19937 rng(42);
  std::vector<std::uint32_t> n;
  for (std::uint32_t x = 3; x < 20000; x += 2) n.push_back(x);
  for (int i = 0; i < 3000; ++i) n.push_back(rng() | 1u | 2u);
  for (std::uint32_t c : {2047u, 3277u, 4033u, 4681u, 8321u, 25326001u, 3215031751u, 4294967291u}) n.push_back(c);
  for (std::uint32_t w : {2u, 7u, 61u, 3u}) {
    std::vector<std::uint8_t> ref(n.size()), got(n.size());
    sprp_batch(n, w, ref, Isa::scalar);
    for (Isa isa : isas()) {
      sprp_batch(n, w, got, isa);
      CHECK(got == ref);
    }
  }
  for (Isa isa : isas()) {
    std::vector<std::uint8_t> got(n.size());
    is_prime_batch(n, got, isa);
    for (std::size_t i = 0; i < n.size(); ++i)
      REQUIRE_MESSAGE(static_cast<bool>(got[i]) == oracle::is_prime(n[i]), isa_name(isa) << " n=" << n[i]);
  }
}

TEST_CASE("length mismatch is rejected") {
  std::vector<std::uint32_t> a(4), b(3), out(4);
  CHECK_THROWS(pow_mod_batch(a, b, a, out, Isa::scalar));
  std::vector<std::uint8_t> flags(2);
  CHECK_THROWS(is_prime_batch(a, flags));
}
