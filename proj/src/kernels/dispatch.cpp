#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "hasse/kernels.hpp"

namespace hasse::kernels {

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(HASSE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa best_isa() {
  static const Isa chosen = [] {
    const char* forced = std::getenv("HASSE_KERNEL");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return chosen;
}

namespace {

void check_sizes(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  if (a != d || b != d || c != d) throw std::invalid_argument("kernel spans differ in length");
}

}  // namespace

void pow_mod_batch(std::span<const std::uint32_t> base, std::span<const std::uint32_t> exponent,
                   std::span<const std::uint32_t> modulus, std::span<std::uint32_t> out, Isa isa) {
  check_sizes(base.size(), exponent.size(), modulus.size(), out.size());
#if defined(HASSE_HAVE_AVX2)
  if (isa == Isa::avx2) return avx2::pow_mod_batch(base, exponent, modulus, out);
#endif
  (void)isa;
  scalar::pow_mod_batch(base, exponent, modulus, out);
}

void pow_mod_batch(std::span<const std::uint32_t> base, std::span<const std::uint32_t> exponent,
                   std::span<const std::uint32_t> modulus, std::span<std::uint32_t> out) {
  pow_mod_batch(base, exponent, modulus, out, best_isa());
}

void sprp_batch(std::span<const std::uint32_t> n, std::uint32_t witness, std::span<std::uint8_t> out, Isa isa) {
  if (n.size() != out.size()) throw std::invalid_argument("kernel spans differ in length");
#if defined(HASSE_HAVE_AVX2)
  if (isa == Isa::avx2) return avx2::sprp_batch(n, witness, out);
#endif
  (void)isa;
  scalar::sprp_batch(n, witness, out);
}

void is_prime_batch(std::span<const std::uint32_t> n, std::span<std::uint8_t> out, Isa isa) {
  if (n.size() != out.size()) throw std::invalid_argument("kernel spans differ in length");
  std::vector<std::uint8_t> tmp(n.size());
  sprp_batch(n, 2, out, isa);
  for (std::uint32_t witness : {7u, 61u}) {
    sprp_batch(n, witness, tmp, isa);
    for (std::size_t i = 0; i < n.size(); ++i) out[i] &= tmp[i];
  }
}

void is_prime_batch(std::span<const std::uint32_t> n, std::span<std::uint8_t> out) {
  is_prime_batch(n, out, best_isa());
}

}  // namespace hasse::kernels
