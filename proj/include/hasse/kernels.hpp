#pragma once

// Batched 32-bit modular kernels used by the candidate scan.
//
// Every kernel has a scalar reference (plain % reduction) and an AVX2 variant
// (4 lanes of Montgomery arithmetic, per-lane moduli). The public entry points
// dispatch on the CPU at runtime; HASSE_KERNEL=scalar in the environment
// forces the reference path. Both paths must agree bit for bit.

#include <cstdint>
#include <span>

namespace hasse::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
/// Widest ISA compiled in and supported by the running CPU.
Isa best_isa();

/// out[i] = base[i]^exponent[i] mod modulus[i].
/// Preconditions: equal lengths; every modulus odd and > 1.
void pow_mod_batch(std::span<const std::uint32_t> base, std::span<const std::uint32_t> exponent,
                   std::span<const std::uint32_t> modulus, std::span<std::uint32_t> out, Isa isa);
void pow_mod_batch(std::span<const std::uint32_t> base, std::span<const std::uint32_t> exponent,
                   std::span<const std::uint32_t> modulus, std::span<std::uint32_t> out);

/// out[i] = 1 iff n[i] is a strong probable prime to base `witness`
/// (trivially 1 when witness = 0 mod n[i]). Precondition: n[i] odd and >= 3.
void sprp_batch(std::span<const std::uint32_t> n, std::uint32_t witness, std::span<std::uint8_t> out, Isa isa);

/// Deterministic primality for odd 32-bit n >= 3 (SPRP to bases 2, 7, 61).
void is_prime_batch(std::span<const std::uint32_t> n, std::span<std::uint8_t> out, Isa isa);
void is_prime_batch(std::span<const std::uint32_t> n, std::span<std::uint8_t> out);

namespace scalar {
void pow_mod_batch(std::span<const std::uint32_t> base, std::span<const std::uint32_t> exponent,
                   std::span<const std::uint32_t> modulus, std::span<std::uint32_t> out);
void sprp_batch(std::span<const std::uint32_t> n, std::uint32_t witness, std::span<std::uint8_t> out);
}  // namespace scalar

#if defined(HASSE_HAVE_AVX2)
namespace avx2 {
void pow_mod_batch(std::span<const std::uint32_t> base, std::span<const std::uint32_t> exponent,
                   std::span<const std::uint32_t> modulus, std::span<std::uint32_t> out);
void sprp_batch(std::span<const std::uint32_t> n, std::uint32_t witness, std::span<std::uint8_t> out);
}  // namespace avx2
#endif

}  // namespace hasse::kernels
