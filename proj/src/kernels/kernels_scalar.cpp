#include <cstddef>

#include "hasse/kernels.hpp"

namespace hasse::kernels::scalar {

namespace {

std::uint32_t pow_mod32(std::uint64_t base, std::uint32_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1u) r = r * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

}  // namespace

void pow_mod_batch(std::span<const std::uint32_t> base, std::span<const std::uint32_t> exponent,
                   std::span<const std::uint32_t> modulus, std::span<std::uint32_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pow_mod32(base[i], exponent[i], modulus[i]);
}

void sprp_batch(std::span<const std::uint32_t> n, std::uint32_t witness, std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < n.size(); ++i) {
    const std::uint64_t m = n[i];
    const std::uint64_t a = witness % m;
    if (a == 0) {
      out[i] = 1;
      continue;
    }
    std::uint32_t d = n[i] - 1;
    int s = 0;
    while ((d & 1u) == 0) {
      d >>= 1;
      ++s;
    }
    std::uint64_t x = pow_mod32(a, d, m);
    bool pass = (x == 1 || x == m - 1);
    for (int r = 1; r < s && !pass; ++r) {
      x = x * x % m;
      pass = (x == m - 1);
    }
    out[i] = pass ? 1 : 0;
  }
}

}  // namespace hasse::kernels::scalar
