#include "hasse/arith.hpp"

#include <array>
#include <limits>
#include <sstream>

#include "hasse/errors.hpp"

namespace hasse {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t r = a % b;
    a = b;
    b = r;
  }
  return a;
}

namespace {

bool miller_rabin_round(std::uint64_t n, std::uint64_t d, int s, std::uint64_t a) {
  std::uint64_t x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) throw ParameterError("is_prime: n must be >= 2");
  // These bases are a deterministic witness set for all n < 3.3e24.
  static constexpr std::array<std::uint64_t, 12> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t b : kBases) {
    if (n == b) return true;
    if (n % b == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kBases)
    if (!miller_rabin_round(n, d, s, a)) return false;
  return true;
}

bool is_prime(const BigInt& n) {
  if (n < 2) throw ParameterError("is_prime: n must be >= 2");
  if (n.fits_ulong_p()) return is_prime(static_cast<std::uint64_t>(n.get_ui()));
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

void require_odd_prime_exponent(std::uint32_t p) {
  if (p <= 3 || !is_prime(static_cast<std::uint64_t>(p)))
    throw ParameterError("exponent p must be a prime > 3, got " + std::to_string(p));
}

// --- Factored ---------------------------------------------------------------

namespace {

std::string big_str(const BigInt& n) { return n.get_str(); }

}  // namespace

Factored Factored::of_integer(std::int64_t n, const FactorOptions& opts) {
  if (n == 0) throw DomainError("cannot factor zero");
  return of_integer(BigInt(static_cast<long>(n)), opts);
}

Factored Factored::of_integer(const BigInt& n, const FactorOptions& opts) {
  if (n == 0) throw DomainError("cannot factor zero");
  Factored f;
  f.sign_ = sgn(n) < 0 ? -1 : 1;
  BigInt rest = abs(n);
  auto strip = [&](std::uint64_t d) {
    while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), d);
      ++f.exponents_[d];
    }
  };
  strip(2);
  strip(3);
  // 6k +- 1 wheel
  for (std::uint64_t d = 5; d <= opts.trial_bound && rest > 1; d += 6) {
    if (BigInt(d) * BigInt(d) > rest) break;
    strip(d);
    strip(d + 2);
  }
  if (rest > 1) {
    if (!is_prime(rest))
      throw FactorizationError("incomplete factorization of " + big_str(n) + ": composite cofactor " +
                               big_str(rest) + " exceeds trial bound " + std::to_string(opts.trial_bound));
    if (!rest.fits_ulong_p())
      throw FactorizationError("prime factor " + big_str(rest) + " exceeds 64 bits");
    ++f.exponents_[rest.get_ui()];
  }
  return f;
}

Factored Factored::of_prime(Prime q, long long exponent) {
  Factored f;
  if (exponent != 0) f.exponents_[q] = exponent;
  return f;
}

Factored Factored::minus_one() {
  Factored f;
  f.sign_ = -1;
  return f;
}

Factored& Factored::operator*=(const Factored& other) {
  sign_ *= other.sign_;
  for (const auto& [q, e] : other.exponents_) {
    long long& slot = exponents_[q];
    slot += e;
    if (slot == 0) exponents_.erase(q);
  }
  return *this;
}

Factored Factored::inverse() const { return pow(-1); }

Factored Factored::pow(long long e) const {
  Factored f;
  f.sign_ = (sign_ < 0 && (e % 2 != 0)) ? -1 : 1;
  if (e == 0) return f;
  for (const auto& [q, x] : exponents_) f.exponents_[q] = x * e;
  return f;
}

BigInt Factored::numerator() const {
  BigInt n = sign_;
  for (const auto& [q, e] : exponents_) {
    if (e <= 0) continue;
    BigInt pw;
    mpz_pow_ui(pw.get_mpz_t(), BigInt(static_cast<unsigned long>(q)).get_mpz_t(), static_cast<unsigned long>(e));
    n *= pw;
  }
  return n;
}

BigInt Factored::denominator() const {
  BigInt d = 1;
  for (const auto& [q, e] : exponents_) {
    if (e >= 0) continue;
    BigInt pw;
    mpz_pow_ui(pw.get_mpz_t(), BigInt(static_cast<unsigned long>(q)).get_mpz_t(), static_cast<unsigned long>(-e));
    d *= pw;
  }
  return d;
}

// --- ResidueClass -----------------------------------------------------------

ResidueClass::ResidueClass(std::uint32_t p) : p_(p) {}

ResidueClass ResidueClass::from_exponents(std::uint32_t p, const std::map<Prime, long long>& exps) {
  ResidueClass r(p);
  for (const auto& [q, e] : exps) {
    std::uint32_t m = mod_p(e, p);
    if (m != 0) r.factors_[q] = m;
  }
  return r;
}

std::uint32_t ResidueClass::exponent(Prime q) const {
  auto it = factors_.find(q);
  return it == factors_.end() ? 0 : it->second;
}

std::vector<Prime> ResidueClass::support() const {
  std::vector<Prime> s;
  s.reserve(factors_.size());
  for (const auto& kv : factors_) s.push_back(kv.first);
  return s;
}

ResidueClass& ResidueClass::operator*=(const ResidueClass& other) {
  if (other.p_ != p_) throw ParameterError("cannot multiply classes for different exponents");
  for (const auto& [q, e] : other.factors_) {
    std::uint32_t m = (exponent(q) + e) % p_;
    if (m == 0)
      factors_.erase(q);
    else
      factors_[q] = m;
  }
  return *this;
}

ResidueClass ResidueClass::inverse() const { return pow(-1); }

ResidueClass ResidueClass::pow(long long e) const {
  ResidueClass r(p_);
  std::uint32_t k = mod_p(e, p_);
  if (k == 0) return r;
  for (const auto& [q, x] : factors_) {
    std::uint32_t m = static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) * k) % p_);
    if (m != 0) r.factors_[q] = m;
  }
  return r;
}

BigInt ResidueClass::representative() const {
  BigInt n = 1;
  for (const auto& [q, e] : factors_) {
    BigInt pw;
    mpz_pow_ui(pw.get_mpz_t(), BigInt(static_cast<unsigned long>(q)).get_mpz_t(), e);
    n *= pw;
  }
  return n;
}

std::string ResidueClass::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [q, e] : factors_) {
    if (!first) os << '*';
    first = false;
    os << q;
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

ResidueClass canonicalize(const Factored& n, std::uint32_t p) {
  require_odd_prime_exponent(p);
  return ResidueClass::from_exponents(p, n.exponents());
}

ResidueClass canonicalize(std::int64_t num, std::int64_t den, std::uint32_t p) {
  if (num == 0) throw DomainError("zero has no class in Q*/Q*^p");
  if (den == 0) throw DomainError("zero denominator");
  return canonicalize(Factored::of_integer(num) * Factored::of_integer(den).inverse(), p);
}

// --- places -----------------------------------------------------------------

LocalPlace LocalPlace::finite(Prime ell) {
  if (ell < 2 || !is_prime(ell)) throw ParameterError("finite place needs a prime, got " + std::to_string(ell));
  LocalPlace pl;
  pl.prime_ = ell;
  return pl;
}

Prime LocalPlace::prime() const {
  if (!prime_) throw ParameterError("archimedean place has no prime");
  return *prime_;
}

std::string LocalPlace::to_string() const { return prime_ ? std::to_string(*prime_) : std::string("inf"); }

LocalClass& LocalClass::operator+=(const LocalClass& o) {
  if (o.p != p) throw ParameterError("local classes for different exponents");
  valuation = (valuation + o.valuation) % p;
  unit_index = (unit_index + o.unit_index) % p;
  return *this;
}

LocalClass LocalClass::scaled(long long k) const {
  std::uint32_t m = mod_p(k, p);
  return LocalClass{p, static_cast<std::uint32_t>(std::uint64_t{valuation} * m % p),
                    static_cast<std::uint32_t>(std::uint64_t{unit_index} * m % p)};
}

// --- symbols ----------------------------------------------------------------

std::uint64_t unit_part_mod(const ResidueClass& q, Prime ell, std::uint64_t m) {
  std::uint64_t w = 1 % m;
  for (const auto& [r, e] : q.factors()) {
    if (r == ell) continue;
    w = mul_mod(w, pow_mod(r % m, e, m), m);
  }
  return w;
}

int residue_symbol(const ResidueClass& q, const LocalPlace& place, std::uint32_t p) {
  require_odd_prime_exponent(p);
  if (q.p() != p) throw ParameterError("residue_symbol: class exponent does not match p");
  if (place.is_archimedean()) return 1;
  const Prime ell = place.prime();
  if (q.exponent(ell) != 0) return -1;
  if (ell == p) {
    const std::uint64_t p2 = std::uint64_t{p} * p;
    return pow_mod(unit_part_mod(q, ell, p2), p - 1, p2) == 1 ? 1 : -1;
  }
  const std::uint64_t w = unit_part_mod(q, ell, ell);
  const std::uint64_t e = (ell - 1) / gcd_u64(p, ell - 1);
  return pow_mod(w, e, ell) == 1 ? 1 : -1;
}

LocalClass local_class(const ResidueClass& q, Prime ell, std::uint32_t p, std::uint64_t generator) {
  require_odd_prime_exponent(p);
  if (q.p() != p) throw ParameterError("local_class: class exponent does not match p");
  if (ell == p) throw ParameterError("local_class: l = p is not supported");
  if (ell < 2 || !is_prime(ell)) throw ParameterError("local_class: l must be prime");
  LocalClass out{p, q.exponent(ell), 0};
  if ((ell - 1) % p != 0) return out;

  const std::uint64_t e = (ell - 1) / p;
  const std::uint64_t g = pow_mod(generator % ell, e, ell);
  if (generator % ell == 0 || g == 1)
    throw ParameterError("local_class: generator " + std::to_string(generator) + " is a p-th power mod " +
                         std::to_string(ell));
  const std::uint64_t target = pow_mod(unit_part_mod(q, ell, ell), e, ell);
  std::uint64_t acc = 1;
  for (std::uint32_t i = 0; i < p; ++i) {
    if (acc == target) {
      out.unit_index = i;
      return out;
    }
    acc = mul_mod(acc, g, ell);
  }
  throw ParameterError("local_class: no discrete log found; is l prime?");
}

}  // namespace hasse
