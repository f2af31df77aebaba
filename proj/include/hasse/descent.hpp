#pragma once

// The curve family C: y^p = x (x - e1) (x - e2) with e0 = 0, e1 = 3uk,
// e2 = 9vk, its rational p-torsion D_i = [(e_i, 0) - inf], and the descent
// maps evaluated on the subgroup <D0, D1> (D0 + D1 + D2 = 0).

#include <cstdint>
#include <string>
#include <vector>

#include "hasse/arith.hpp"

namespace hasse {

class CurveFamily {
 public:
  /// Throws ParameterError: p not a prime > 3, 3 | uv, u = 3v, repeated or non-prime k factors.
  static CurveFamily make(std::uint32_t p, std::int64_t u, std::int64_t v, std::vector<Prime> k_primes);

  std::uint32_t p() const { return p_; }
  std::int64_t u() const { return u_; }
  std::int64_t v() const { return v_; }
  const std::vector<Prime>& k_primes() const { return k_primes_; }
  std::uint32_t genus() const { return p_ - 1; }

  BigInt k() const;
  BigInt e1() const;  // 3uk
  BigInt e2() const;  // 9vk

  /// e_i for i in {0, 1, 2}, factored (e0 = 0 has no factorization).
  Factored e_factored(int i) const;
  /// e_j - e_i, factored; throws for i == j.
  Factored difference(int j, int i) const;

 private:
  std::uint32_t p_ = 0;
  std::int64_t u_ = 0;
  std::int64_t v_ = 0;
  std::vector<Prime> k_primes_;
  Factored u_f_, v_f_, w_f_, k_f_;  // u, v, u - 3v, k
};

/// a * D0 + b * D1 with (a, b) in (Z/p)^2.
struct TorsionElement {
  std::uint32_t p = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  static TorsionElement make(std::uint32_t p, long long a, long long b);
  static TorsionElement d0(std::uint32_t p) { return make(p, 1, 0); }
  static TorsionElement d1(std::uint32_t p) { return make(p, 0, 1); }
  static TorsionElement d2(std::uint32_t p) { return make(p, -1, -1); }

  TorsionElement& operator+=(const TorsionElement& o);
  friend TorsionElement operator+(TorsionElement x, const TorsionElement& y) { return x += y; }
  friend bool operator==(const TorsionElement&, const TorsionElement&) = default;
};

struct KummerPair {
  ResidueClass first;
  ResidueClass second;

  ResidueClass product() const { return first * second; }
  KummerPair& operator*=(const KummerPair& o);
  friend KummerPair operator*(KummerPair x, const KummerPair& y) { return x *= y; }
  friend bool operator==(const KummerPair&, const KummerPair&) = default;
};

/// d^H on <D0, D1>, from the closed forms
///   d^H(D0) = [e1^-1 e2^-1, -e1],  d^H(D1) = [e1, e1^-1 (e1 - e2)^-1].
KummerPair torsion_image_H(const TorsionElement& elt, const CurveFamily& curve);

/// d^{D_i}(D_j) for generators j in {0, 1, 2}: the function prod (x - e_i)
/// evaluated at (e_j, 0) when j != i, and through d^{D0} d^{D1} d^{D2} = 1 when j = i.
ResidueClass di_on_generator(int i, int j, const CurveFamily& curve);

/// d^{D_i}(a D0 + b D1), i in {0, 1, 2}.
ResidueClass torsion_image_Di(const TorsionElement& elt, int i, const CurveFamily& curve);

/// d^D = first * second component of d^H.
ResidueClass torsion_image_D(const TorsionElement& elt, const CurveFamily& curve);

struct TorsorEquation {
  enum class Kind { curve, twist };
  Kind kind = Kind::curve;
  std::uint32_t index = 0;  // 1..g for curve equations, 0 for the twist equation
  std::string lhs;
  std::string rhs;

  std::string text() const { return lhs + " = " + rhs; }
};

struct TorsorEquations {
  std::uint32_t p = 0;
  BigInt e1;
  BigInt e2;
  ResidueClass twist{5};
  std::vector<TorsorEquation> equations;  // g curve equations, then the twist equation

  /// One equation per line, '\n'-terminated.
  std::string render() const;
};

/// y_i^p = x_i (x_i - e1)(x_i - e2), i = 1..g, and q z^p = prod x_i (x_i - e1).
TorsorEquations emit_models(const CurveFamily& curve, const ResidueClass& twist);

}  // namespace hasse
