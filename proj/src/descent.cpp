#include "hasse/descent.hpp"

#include <algorithm>
#include <sstream>

#include "hasse/errors.hpp"

namespace hasse {

CurveFamily CurveFamily::make(std::uint32_t p, std::int64_t u, std::int64_t v, std::vector<Prime> k_primes) {
  require_odd_prime_exponent(p);
  constexpr std::int64_t kMax = std::int64_t{1} << 59;
  if (u == 0 || v == 0) throw ParameterError("u and v must be nonzero");
  if (u >= kMax || u <= -kMax || v >= kMax || v <= -kMax) throw ParameterError("|u| and |v| must be below 2^59");
  if (u % 3 == 0 || v % 3 == 0) throw ParameterError("u and v must not be divisible by 3");
  if (u == 3 * v) throw ParameterError("singular curve: u = 3v");
  std::sort(k_primes.begin(), k_primes.end());
  if (std::adjacent_find(k_primes.begin(), k_primes.end()) != k_primes.end())
    throw ParameterError("k must be squarefree");
  for (Prime q : k_primes)
    if (q < 2 || !is_prime(q)) throw ParameterError("k factor " + std::to_string(q) + " is not prime");

  CurveFamily c;
  c.p_ = p;
  c.u_ = u;
  c.v_ = v;
  c.k_primes_ = std::move(k_primes);
  c.u_f_ = Factored::of_integer(u);
  c.v_f_ = Factored::of_integer(v);
  c.w_f_ = Factored::of_integer(u - 3 * v);
  for (Prime q : c.k_primes_) c.k_f_ *= Factored::of_prime(q);
  return c;
}

BigInt CurveFamily::k() const { return k_f_.numerator(); }
BigInt CurveFamily::e1() const { return 3 * BigInt(static_cast<long>(u_)) * k(); }
BigInt CurveFamily::e2() const { return 9 * BigInt(static_cast<long>(v_)) * k(); }

Factored CurveFamily::e_factored(int i) const {
  switch (i) {
    case 1:
      return Factored::of_prime(3) * u_f_ * k_f_;
    case 2:
      return Factored::of_prime(3, 2) * v_f_ * k_f_;
    default:
      throw DomainError("e0 = 0 has no class");
  }
}

Factored CurveFamily::difference(int j, int i) const {
  if (i == j) throw DomainError("e_i - e_i = 0");
  if (i == 0) return e_factored(j);
  if (j == 0) return Factored::minus_one() * e_factored(i);
  // e1 - e2 = 3k (u - 3v)
  Factored e1_minus_e2 = Factored::of_prime(3) * k_f_ * w_f_;
  return j == 1 ? e1_minus_e2 : Factored::minus_one() * e1_minus_e2;
}

TorsionElement TorsionElement::make(std::uint32_t p, long long a, long long b) {
  return TorsionElement{p, mod_p(a, p), mod_p(b, p)};
}

TorsionElement& TorsionElement::operator+=(const TorsionElement& o) {
  if (o.p != p) throw ParameterError("torsion elements for different p");
  a = (a + o.a) % p;
  b = (b + o.b) % p;
  return *this;
}

KummerPair& KummerPair::operator*=(const KummerPair& o) {
  first *= o.first;
  second *= o.second;
  return *this;
}

namespace {

void check_p(const TorsionElement& elt, const CurveFamily& curve) {
  if (elt.p != curve.p()) throw ParameterError("torsion element and curve use different p");
}

}  // namespace

KummerPair torsion_image_H(const TorsionElement& elt, const CurveFamily& curve) {
  check_p(elt, curve);
  const std::uint32_t p = curve.p();
  const Factored e1 = curve.e_factored(1);
  const Factored e2 = curve.e_factored(2);
  const KummerPair h0{canonicalize((e1 * e2).inverse(), p), canonicalize(Factored::minus_one() * e1, p)};
  const KummerPair h1{canonicalize(e1, p), canonicalize((e1 * curve.difference(1, 2)).inverse(), p)};
  return KummerPair{h0.first.pow(elt.a) * h1.first.pow(elt.b), h0.second.pow(elt.a) * h1.second.pow(elt.b)};
}

ResidueClass di_on_generator(int i, int j, const CurveFamily& curve) {
  if (i < 0 || i > 2 || j < 0 || j > 2) throw ParameterError("descent map index must be 0, 1 or 2");
  const std::uint32_t p = curve.p();
  if (i != j) return canonicalize(curve.difference(j, i), p);
  ResidueClass acc(p);
  for (int m = 0; m < 3; ++m)
    if (m != i) acc *= canonicalize(curve.difference(j, m), p);
  return acc.inverse();
}

ResidueClass torsion_image_Di(const TorsionElement& elt, int i, const CurveFamily& curve) {
  check_p(elt, curve);
  return di_on_generator(i, 0, curve).pow(elt.a) * di_on_generator(i, 1, curve).pow(elt.b);
}

ResidueClass torsion_image_D(const TorsionElement& elt, const CurveFamily& curve) {
  return torsion_image_H(elt, curve).product();
}

// --- models -----------------------------------------------------------------

namespace {

std::string shifted(const std::string& x, const BigInt& e) {
  if (sgn(e) >= 0) return "(" + x + " - " + e.get_str() + ")";
  return "(" + x + " + " + BigInt(-e).get_str() + ")";
}

}  // namespace

std::string TorsorEquations::render() const {
  std::string out;
  for (const auto& eq : equations) out += eq.text() + "\n";
  return out;
}

TorsorEquations emit_models(const CurveFamily& curve, const ResidueClass& twist) {
  if (twist.p() != curve.p()) throw ParameterError("twist class and curve use different p");
  TorsorEquations m;
  m.p = curve.p();
  m.e1 = curve.e1();
  m.e2 = curve.e2();
  m.twist = twist;
  const std::string pw = "^" + std::to_string(curve.p());
  std::string product;
  for (std::uint32_t i = 1; i <= curve.genus(); ++i) {
    const std::string x = "x_" + std::to_string(i);
    m.equations.push_back({TorsorEquation::Kind::curve, i, "y_" + std::to_string(i) + pw,
                           x + "*" + shifted(x, m.e1) + "*" + shifted(x, m.e2)});
    if (i > 1) product += "*";
    product += x + "*" + shifted(x, m.e1);
  }
  const BigInt q = twist.representative();
  const std::string lhs = (q == 1 ? std::string() : q.get_str() + "*") + "z" + pw;
  m.equations.push_back({TorsorEquation::Kind::twist, 0, lhs, product});
  return m;
}

}  // namespace hasse
