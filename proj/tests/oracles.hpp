#pragma once

// Independent brute-force references used by the tests. Nothing here calls
// into the library's arithmetic.

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1 % m, x = b % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

/// Exponent map of |n| by trial division.
inline std::map<std::uint64_t, long long> factor(long long n) {
  std::map<std::uint64_t, long long> out;
  std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
  for (std::uint64_t d = 2; d * d <= m; ++d)
    while (m % d == 0) {
      ++out[d];
      m /= d;
    }
  if (m > 1) ++out[m];
  return out;
}

/// The set {x^p mod m : gcd(x, m) = 1}.
inline std::set<std::uint64_t> pth_powers(std::uint64_t p, std::uint64_t m) {
  std::set<std::uint64_t> s;
  for (std::uint64_t x = 1; x < m; ++x)
    if (std::gcd(x, m) == 1) s.insert(powmod(x, p, m));
  return s;
}

/// Is num/den a p-th power in Q_ell? Valuation divisible by p and the unit
/// part among the enumerated p-th powers mod ell (mod p^2 when ell = p).
inline bool is_local_pth_power(long long num, long long den, std::uint64_t ell, std::uint64_t p) {
  long long v = 0;
  auto strip = [&](long long x, int sign) {
    std::uint64_t m = x < 0 ? -x : x;
    while (m % ell == 0) {
      m /= ell;
      v += sign;
    }
    return m;
  };
  const std::uint64_t a = strip(num, 1), b = strip(den, -1);
  if (((v % static_cast<long long>(p)) + p) % p != 0) return false;
  const std::uint64_t mod = ell == p ? p * p : ell;
  std::uint64_t inv = 0;
  for (std::uint64_t x = 1; x < mod; ++x)
    if (b % mod * x % mod == 1) inv = x;
  const std::uint64_t w = a % mod * inv % mod;
  return pth_powers(p, mod).count(w) != 0;
}

/// Exhaustive feasibility of A x = b over F_p by depth-first assignment;
/// each row is tested as soon as its last nonzero column is fixed.
inline bool feasible_by_enumeration(const std::vector<std::vector<std::uint32_t>>& a,
                                    const std::vector<std::uint32_t>& b, std::uint32_t p,
                                    std::vector<std::uint32_t>* witness = nullptr) {
  const std::size_t n = a.empty() ? 0 : a[0].size();
  std::vector<std::vector<std::size_t>> rows_closing_at(n + 1);
  for (std::size_t r = 0; r < a.size(); ++r) {
    std::size_t last = 0;
    for (std::size_t c = 0; c < n; ++c)
      if (a[r][c] % p) last = c + 1;
    rows_closing_at[last].push_back(r);
  }
  for (std::size_t r : rows_closing_at[0])
    if (b[r] % p) return false;
  std::vector<std::uint32_t> x(n, 0);
  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    if (k == n) return true;
    for (std::uint32_t v = 0; v < p; ++v) {
      x[k] = v;
      bool ok = true;
      for (std::size_t r : rows_closing_at[k + 1]) {
        std::uint64_t acc = 0;
        for (std::size_t c = 0; c <= k; ++c) acc += std::uint64_t{a[r][c]} * x[c];
        if (acc % p != b[r] % p) {
          ok = false;
          break;
        }
      }
      if (ok && go(k + 1)) return true;
    }
    return false;
  };
  const bool f = go(0);
  if (f && witness) *witness = x;
  return f;
}

}  // namespace oracle
