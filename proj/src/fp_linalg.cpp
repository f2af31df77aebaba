#include "hasse/fp_linalg.hpp"

#include <stdexcept>

#include "hasse/arith.hpp"

namespace hasse::fp {

std::uint32_t reduce(long long x, std::uint32_t p) { return mod_p(x, p); }

std::uint32_t inverse(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw std::domain_error("zero has no inverse in F_p");
  return static_cast<std::uint32_t>(pow_mod(a, p - 2, p));
}

Solution solve(const Matrix& a, std::span<const std::uint32_t> b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::uint64_t p = a.p();
  if (b.size() != m) throw std::invalid_argument("solve: rhs length does not match rows");

  // Row r of the work matrix: A-part [0, n), b at n, identity at [n + 1, n + 1 + m).
  const std::size_t width = n + 1 + m;
  std::vector<std::uint64_t> w(m * width, 0);
  auto cell = [&](std::size_t r, std::size_t c) -> std::uint64_t& { return w[r * width + c]; };
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) cell(r, c) = a.at(r, c);
    cell(r, n) = b[r] % p;
    cell(r, n + 1 + r) = 1;
  }

  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t piv = row;
    while (piv < m && cell(piv, col) == 0) ++piv;
    if (piv == m) continue;
    if (piv != row)
      for (std::size_t c = 0; c < width; ++c) std::swap(cell(piv, c), cell(row, c));
    const std::uint64_t inv = inverse(static_cast<std::uint32_t>(cell(row, col)), static_cast<std::uint32_t>(p));
    for (std::size_t c = 0; c < width; ++c) cell(row, c) = cell(row, c) * inv % p;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || cell(r, col) == 0) continue;
      const std::uint64_t f = cell(r, col);
      for (std::size_t c = 0; c < width; ++c) cell(r, c) = (cell(r, c) + (p - f) * cell(row, c)) % p;
    }
    pivot_col.push_back(col);
    ++row;
  }

  Solution s;
  s.rank = pivot_col.size();
  for (std::size_t r = s.rank; r < m; ++r) {
    if (cell(r, n) != 0) {
      s.feasible = false;
      s.y.resize(m);
      for (std::size_t k = 0; k < m; ++k) s.y[k] = static_cast<std::uint32_t>(cell(r, n + 1 + k));
      return s;
    }
  }
  s.feasible = true;
  s.x.assign(n, 0);
  for (std::size_t r = 0; r < s.rank; ++r) s.x[pivot_col[r]] = static_cast<std::uint32_t>(cell(r, n));
  return s;
}

bool satisfies(const Matrix& a, std::span<const std::uint32_t> b, std::span<const std::uint32_t> x) {
  if (x.size() != a.cols() || b.size() != a.rows()) return false;
  const std::uint64_t p = a.p();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc = (acc + std::uint64_t{a.at(r, c)} * (x[c] % p)) % p;
    if (acc != b[r] % p) return false;
  }
  return true;
}

bool refutes(const Matrix& a, std::span<const std::uint32_t> b, std::span<const std::uint32_t> y) {
  if (y.size() != a.rows() || b.size() != a.rows()) return false;
  const std::uint64_t p = a.p();
  for (std::size_t c = 0; c < a.cols(); ++c) {
    std::uint64_t acc = 0;
    for (std::size_t r = 0; r < a.rows(); ++r) acc = (acc + std::uint64_t{y[r] % p} * a.at(r, c)) % p;
    if (acc != 0) return false;
  }
  std::uint64_t dot = 0;
  for (std::size_t r = 0; r < a.rows(); ++r) dot = (dot + std::uint64_t{y[r] % p} * (b[r] % p)) % p;
  return dot != 0;
}

}  // namespace hasse::fp
