#include "hasse/local.hpp"

#include <algorithm>
#include <set>

#include "hasse/errors.hpp"

namespace hasse {

namespace {

ResidueClass prime_class(Prime r, std::uint32_t p) { return ResidueClass::from_exponents(p, {{r, 1}}); }

std::array<std::uint32_t, 4> row_of(const std::array<LocalClass, 2>& g) {
  return {g[0].valuation, g[0].unit_index, g[1].valuation, g[1].unit_index};
}

/// First nonzero 2x2 minor of the 2x4 matrix, or 0 if the rows are dependent.
std::uint32_t nonzero_minor(const LocalGenerators& g, std::uint32_t p) {
  const auto r0 = row_of(g.d0);
  const auto r1 = row_of(g.d1);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const long long det = static_cast<long long>(r0[i]) * r1[j] - static_cast<long long>(r0[j]) * r1[i];
      const std::uint32_t m = mod_p(det, p);
      if (m != 0) return m;
    }
  return 0;
}

}  // namespace

LocalGenerators expected_local_generators(std::uint32_t p, Prime place) {
  auto lc = [p](long long v, long long i) { return LocalClass{p, mod_p(v, p), mod_p(i, p)}; };
  LocalGenerators g;
  g.place = place;
  g.d0 = {lc(-2, -3), lc(1, 1)};
  g.d1 = {lc(1, 1), lc(-2, -2)};
  g.minor = nonzero_minor(g, p);
  return g;
}

LocalGenerators local_generators(const CurveFamily& curve, Prime ell) {
  const std::uint32_t p = curve.p();
  const auto& ks = curve.k_primes();
  if (std::find(ks.begin(), ks.end(), ell) == ks.end())
    throw ParameterError("local generators are only defined at the tuple primes");
  const std::string at = " at p_i = " + std::to_string(ell);
  if (ell % p != 1) throw CertificateFailure("hypothesis p_i = 1 mod p fails" + at);
  if (residue_symbol(prime_class(kGluingPrime, p), LocalPlace::finite(ell), p) == 1)
    throw CertificateFailure("(3/" + std::to_string(ell) + ")_p = +1, but 3 must be a non-p-th power" + at);

  const KummerPair h0 = torsion_image_H(TorsionElement::d0(p), curve);
  const KummerPair h1 = torsion_image_H(TorsionElement::d1(p), curve);
  LocalGenerators g;
  g.place = ell;
  g.d0 = {local_class(h0.first, ell, p, kGluingPrime), local_class(h0.second, ell, p, kGluingPrime)};
  g.d1 = {local_class(h1.first, ell, p, kGluingPrime), local_class(h1.second, ell, p, kGluingPrime)};

  const LocalGenerators want = expected_local_generators(p, ell);
  if (g.d0 != want.d0 || g.d1 != want.d1) {
    std::set<Prime> factors;
    for (const ResidueClass* c : {&h0.first, &h0.second, &h1.first, &h1.second})
      for (Prime r : c->support())
        if (r != ell && r != kGluingPrime) factors.insert(r);
    for (Prime r : factors)
      if (residue_symbol(prime_class(r, p), LocalPlace::finite(ell), p) != 1)
        throw CertificateFailure("(" + std::to_string(r) + "/" + std::to_string(ell) +
                                 ")_p = -1, but it must be a local p-th power" + at);
    throw CertificateFailure("torsion images do not reduce to the expected local generators" + at);
  }
  g.minor = nonzero_minor(g, p);
  if (g.minor == 0) throw CertificateFailure("local generators are linearly dependent" + at);
  return g;
}

const char* place_case_name(PlaceCase c) {
  switch (c) {
    case PlaceCase::archimedean_trivial:
      return "archimedean-trivial";
    case PlaceCase::unramified_unit:
      return "unramified-unit";
    case PlaceCase::local_pth_power:
      return "local-pth-power";
    case PlaceCase::torsion_combination:
      return "torsion-combination";
  }
  return "unknown";
}

bool MembershipCertificate::pass() const { return first_failure().empty(); }

std::string MembershipCertificate::first_failure() const {
  for (const auto& r : reports)
    if (!r.pass) return "place " + r.place.to_string() + " (" + place_case_name(r.kind) + "): " + r.detail;
  if (!others.pass) return "other places: " + others.detail;
  return {};
}

bool witness_round_trips(const TorsionElement& witness, const LocalClass& target, const CurveFamily& curve,
                         Prime place) {
  return local_class(torsion_image_D(witness, curve), place, curve.p(), kGluingPrime) == target;
}

namespace {

PlaceReport torsion_combination_report(const ResidueClass& q, const CurveFamily& curve, Prime ell,
                                       std::vector<LocalGenerators>& generators) {
  const std::uint32_t p = curve.p();
  PlaceReport rep;
  rep.place = LocalPlace::finite(ell);
  rep.kind = PlaceCase::torsion_combination;
  LocalGenerators g;
  try {
    g = local_generators(curve, ell);
  } catch (const CertificateFailure& e) {
    rep.detail = e.what();
    return rep;
  }
  generators.push_back(g);
  const LocalClass target = local_class(q, ell, p, kGluingPrime);
  rep.target = target;

  // a * d^D(D0) + b * d^D(D1) = target in (valuation, unit index) coordinates
  const LocalClass g0 = g.d0_product();
  const LocalClass g1 = g.d1_product();
  std::optional<TorsionElement> found;
  for (std::uint32_t a = 0; a < p && !found; ++a)
    for (std::uint32_t b = 0; b < p && !found; ++b)
      if (g0.scaled(a) + g1.scaled(b) == target) found = TorsionElement::make(p, a, b);
  if (!found) {
    rep.detail = "no torsion combination reproduces q locally";
    return rep;
  }
  rep.witness = found;
  if (!witness_round_trips(*found, target, curve, ell)) {
    rep.detail = "witness does not round-trip through d^D";
    return rep;
  }
  rep.pass = true;
  rep.detail = "q = d^D(" + std::to_string(found->a) + " D0 + " + std::to_string(found->b) + " D1) locally";
  return rep;
}

}  // namespace

MembershipCertificate verify_membership(const ResidueClass& q, const CurveFamily& curve,
                                        const AdmissibleTuple& tuple) {
  const std::uint32_t p = curve.p();
  if (tuple.params.p != p || tuple.params.u != curve.u() || tuple.params.v != curve.v() ||
      tuple.primes != curve.k_primes())
    throw ParameterError("curve does not match the admissible tuple");
  if (q.p() != p) throw ParameterError("twist class uses a different p");
  const auto& primes = tuple.primes;
  auto in_tuple = [&](Prime r) { return std::find(primes.begin(), primes.end(), r) != primes.end(); };
  for (Prime r : q.support())
    if (!in_tuple(r)) throw ParameterError("twist is divisible by " + std::to_string(r) + ", outside the tuple");

  MembershipCertificate cert;
  cert.p = p;
  cert.twist = q;
  std::set<Prime> critical(tuple.ramified.begin(), tuple.ramified.end());
  critical.insert(primes.begin(), primes.end());
  cert.critical.assign(critical.begin(), critical.end());

  PlaceReport arch;
  arch.place = LocalPlace::archimedean();
  arch.kind = PlaceCase::archimedean_trivial;
  arch.pass = true;
  arch.detail = "R*/R*^p is trivial for odd p";
  cert.reports.push_back(arch);

  for (Prime ell : cert.critical) {
    if (in_tuple(ell) && q.exponent(ell) != 0) {
      cert.reports.push_back(torsion_combination_report(q, curve, ell, cert.generators));
      continue;
    }
    PlaceReport rep;
    rep.place = LocalPlace::finite(ell);
    rep.kind = PlaceCase::local_pth_power;
    rep.symbol = residue_symbol(q, rep.place, p);
    rep.pass = rep.symbol == 1;
    rep.detail = rep.pass ? "q is a p-th power, the image of the identity" : "q is not a local p-th power";
    cert.reports.push_back(rep);
  }

  // Bad reduction only at primes dividing 3 p u v (u - 3v) k.
  Factored disc = Factored::of_integer(3) * Factored::of_integer(static_cast<std::int64_t>(p)) *
                  Factored::of_integer(curve.u()) * Factored::of_integer(curve.v()) *
                  Factored::of_integer(curve.u() - 3 * curve.v());
  for (Prime r : primes) disc *= Factored::of_prime(r);
  for (const auto& kv : disc.exponents()) cert.others.bad_reduction.push_back(kv.first);
  cert.others.pass = true;
  for (Prime r : cert.others.bad_reduction)
    if (!critical.contains(r)) {
      cert.others.pass = false;
      cert.others.detail = "bad reduction at " + std::to_string(r) + " outside the critical set";
    }
  for (Prime r : q.support())
    if (!critical.contains(r)) {
      cert.others.pass = false;
      cert.others.detail = "q has nonzero valuation at " + std::to_string(r);
    }
  if (cert.others.pass)
    cert.others.detail = "good reduction and v_l(q) = 0 mod p: q lies in the unramified local image";
  return cert;
}

}  // namespace hasse
