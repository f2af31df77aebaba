// Compiled with -mavx2. Four 64-bit lanes, each holding a 32-bit residue
// in Montgomery form (R = 2^32) for its own odd modulus.

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>

#include "hasse/kernels.hpp"

namespace hasse::kernels::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

/// -m^{-1} mod 2^32 for odd m (Newton iteration, 3 -> 6 -> 12 -> 24 -> 48 bits).
std::uint32_t neg_inverse(std::uint32_t m) {
  std::uint32_t x = m;
  for (int i = 0; i < 4; ++i) x *= 2u - m * x;
  return 0u - x;
}

/// 2^64 mod m
std::uint64_t r_squared(std::uint32_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) % m);
}

struct Lanes {
  __m256i mod;
  __m256i ninv;
  __m256i r2;
};

Lanes load_moduli(const std::uint32_t* m) {
  alignas(32) std::array<std::uint64_t, kLanes> ninv{};
  alignas(32) std::array<std::uint64_t, kLanes> r2{};
  for (std::size_t j = 0; j < kLanes; ++j) {
    ninv[j] = neg_inverse(m[j]);
    r2[j] = r_squared(m[j]);
  }
  return Lanes{_mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(m))),
               _mm256_load_si256(reinterpret_cast<const __m256i*>(ninv.data())),
               _mm256_load_si256(reinterpret_cast<const __m256i*>(r2.data()))};
}

__m256i load_u32(const std::uint32_t* p) {
  return _mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
}

/// a * b * 2^-32 mod m for a, b < m; result fully reduced.
inline __m256i mont_mul(__m256i a, __m256i b, const Lanes& l) {
  const __m256i low_mask = _mm256_set1_epi64x(0xffffffffLL);
  const __m256i one = _mm256_set1_epi64x(1);
  __m256i t = _mm256_mul_epu32(a, b);
  __m256i q = _mm256_mul_epu32(t, l.ninv);
  __m256i qm = _mm256_mul_epu32(q, l.mod);
  // (t + q m) / 2^32 without a 65-bit intermediate: the low halves sum to
  // 0 or 2^32, and they carry exactly when low(t) != 0.
  __m256i low_zero = _mm256_cmpeq_epi64(_mm256_and_si256(t, low_mask), _mm256_setzero_si256());
  __m256i carry = _mm256_andnot_si256(low_zero, one);
  __m256i u = _mm256_add_epi64(_mm256_add_epi64(_mm256_srli_epi64(t, 32), _mm256_srli_epi64(qm, 32)), carry);
  __m256i ge = _mm256_cmpgt_epi64(u, _mm256_sub_epi64(l.mod, one));
  return _mm256_sub_epi64(u, _mm256_and_si256(ge, l.mod));
}

inline __m256i to_mont(__m256i a, const Lanes& l) { return mont_mul(a, l.r2, l); }
inline __m256i from_mont(__m256i a, const Lanes& l) { return mont_mul(a, _mm256_set1_epi64x(1), l); }

/// base^exp in Montgomery form; base already reduced mod m and in Montgomery form.
__m256i mont_pow(__m256i base_m, __m256i exp, int top_bit, const Lanes& l) {
  const __m256i one = _mm256_set1_epi64x(1);
  __m256i acc = to_mont(one, l);
  for (int bit = top_bit; bit >= 0; --bit) {
    acc = mont_mul(acc, acc, l);
    __m256i b = _mm256_and_si256(_mm256_srl_epi64(exp, _mm_cvtsi32_si128(bit)), one);
    __m256i take = _mm256_cmpeq_epi64(b, one);
    acc = _mm256_blendv_epi8(acc, mont_mul(acc, base_m, l), take);
  }
  return acc;
}

void store_u32(std::uint32_t* dst, __m256i v) {
  const __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7);
  __m256i packed = _mm256_permutevar8x32_epi32(v, idx);
  _mm_storeu_si128(reinterpret_cast<__m128i*>(dst), _mm256_castsi256_si128(packed));
}

int top_bit_of(const std::uint32_t* e) {
  std::uint32_t all = e[0] | e[1] | e[2] | e[3];
  return all == 0 ? -1 : 31 - std::countl_zero(all);
}

}  // namespace

void pow_mod_batch(std::span<const std::uint32_t> base, std::span<const std::uint32_t> exponent,
                   std::span<const std::uint32_t> modulus, std::span<std::uint32_t> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  alignas(16) std::array<std::uint32_t, kLanes> reduced{};
  for (; i + kLanes <= n; i += kLanes) {
    const Lanes l = load_moduli(&modulus[i]);
    for (std::size_t j = 0; j < kLanes; ++j) reduced[j] = base[i + j] % modulus[i + j];
    __m256i b = to_mont(load_u32(reduced.data()), l);
    __m256i r = mont_pow(b, load_u32(&exponent[i]), top_bit_of(&exponent[i]), l);
    store_u32(&out[i], from_mont(r, l));
  }
  if (i < n)
    scalar::pow_mod_batch(base.subspan(i), exponent.subspan(i), modulus.subspan(i), out.subspan(i));
}

void sprp_batch(std::span<const std::uint32_t> nums, std::uint32_t witness, std::span<std::uint8_t> out) {
  const std::size_t n = nums.size();
  std::size_t i = 0;
  alignas(16) std::array<std::uint32_t, kLanes> odd_part{};
  alignas(16) std::array<std::uint32_t, kLanes> wit{};
  alignas(32) std::array<std::uint64_t, kLanes> twos{};
  alignas(32) std::array<std::uint64_t, kLanes> res{};
  for (; i + kLanes <= n; i += kLanes) {
    const Lanes l = load_moduli(&nums[i]);
    int max_s = 0;
    for (std::size_t j = 0; j < kLanes; ++j) {
      const std::uint32_t m = nums[i + j];
      const int s = std::countr_zero(m - 1);
      odd_part[j] = (m - 1) >> s;
      twos[j] = static_cast<std::uint64_t>(s);
      wit[j] = witness % m;
      max_s = std::max(max_s, s);
    }
    const __m256i zero = _mm256_setzero_si256();
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i w = load_u32(wit.data());
    const __m256i s_vec = _mm256_load_si256(reinterpret_cast<const __m256i*>(twos.data()));
    const __m256i one_m = to_mont(one, l);
    const __m256i minus_one_m = _mm256_sub_epi64(l.mod, one_m);

    __m256i x = mont_pow(to_mont(w, l), load_u32(odd_part.data()), top_bit_of(odd_part.data()), l);
    __m256i pass = _mm256_or_si256(_mm256_cmpeq_epi64(x, one_m), _mm256_cmpeq_epi64(x, minus_one_m));
    pass = _mm256_or_si256(pass, _mm256_cmpeq_epi64(w, zero));
    for (int r = 1; r < max_s; ++r) {
      x = mont_mul(x, x, l);
      __m256i in_range = _mm256_cmpgt_epi64(s_vec, _mm256_set1_epi64x(r));
      pass = _mm256_or_si256(pass, _mm256_and_si256(in_range, _mm256_cmpeq_epi64(x, minus_one_m)));
    }
    _mm256_store_si256(reinterpret_cast<__m256i*>(res.data()), pass);
    for (std::size_t j = 0; j < kLanes; ++j) out[i + j] = res[j] != 0 ? 1 : 0;
  }
  if (i < n) scalar::sprp_batch(nums.subspan(i), witness, out.subspan(i));
}

}  // namespace hasse::kernels::avx2
