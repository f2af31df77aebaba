#pragma once

// Dense linear algebra over F_p for the small systems produced by the
// obstruction module. Infeasibility comes with a left-kernel witness y
// (y A = 0, y . b != 0) so a verifier can re-check it with two dot products.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hasse::fp {

std::uint32_t reduce(long long x, std::uint32_t p);
std::uint32_t inverse(std::uint32_t a, std::uint32_t p);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, std::uint32_t p) : rows_(rows), cols_(cols), p_(p), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t p() const { return p_; }

  std::uint32_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, long long value) { data_[r * cols_ + c] = reduce(value, p_); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint32_t p_ = 2;
  std::vector<std::uint32_t> data_;
};

struct Solution {
  bool feasible = false;
  std::size_t rank = 0;
  std::vector<std::uint32_t> x;  // A x = b, free variables set to 0 (when feasible)
  std::vector<std::uint32_t> y;  // y A = 0, y . b != 0 (when infeasible)
};

/// Gaussian elimination on [A | b | I].
Solution solve(const Matrix& a, std::span<const std::uint32_t> b);

/// A x == b
bool satisfies(const Matrix& a, std::span<const std::uint32_t> b, std::span<const std::uint32_t> x);
/// y A == 0 and y . b != 0
bool refutes(const Matrix& a, std::span<const std::uint32_t> b, std::span<const std::uint32_t> y);

}  // namespace hasse::fp
