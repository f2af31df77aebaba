#pragma once

// Everywhere-local membership of a twist class q in the Selmer set of B_k:
// q must lie in the local image of d^D at every place of Q.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hasse/arith.hpp"
#include "hasse/descent.hpp"
#include "hasse/search.hpp"

namespace hasse {

/// Base of every unit index at the tuple primes. Condition (4) makes it a
/// non-p-th power there.
inline constexpr Prime kGluingPrime = 3;

/// d^H(D0) and d^H(D1) in local coordinates at l = p_i, unit index base 3.
struct LocalGenerators {
  Prime place = 0;
  std::array<LocalClass, 2> d0{};  // (first, second) component of d^H(D0)
  std::array<LocalClass, 2> d1{};
  /// Some nonzero 2x2 minor of the 2x4 matrix [d0; d1] over F_p (value mod p).
  std::uint32_t minor = 0;

  /// d^D images (component sums) of D0 and D1.
  LocalClass d0_product() const { return d0[0] + d0[1]; }
  LocalClass d1_product() const { return d1[0] + d1[1]; }
};

/// The images expected when conditions (1)-(3) hold:
///   D0 -> ((-2, -3), (1, 1)),  D1 -> ((1, 1), (-2, -2)).
LocalGenerators expected_local_generators(std::uint32_t p, Prime place);

/// Localizes the torsion images at ell. Throws CertificateFailure naming the
/// offending residue symbol when a factor expected to be a local p-th power is
/// not, when 3 is a p-th power at ell, or when the generators are dependent.
LocalGenerators local_generators(const CurveFamily& curve, Prime ell);

enum class PlaceCase { archimedean_trivial, unramified_unit, local_pth_power, torsion_combination };
const char* place_case_name(PlaceCase c);

struct PlaceReport {
  LocalPlace place = LocalPlace::archimedean();
  PlaceCase kind = PlaceCase::archimedean_trivial;
  int symbol = 1;                          // (q/l)_p for local_pth_power
  std::optional<TorsionElement> witness;  // for torsion_combination
  std::optional<LocalClass> target;       // q's local class, for torsion_combination
  bool pass = false;
  std::string detail;
};

/// All places outside U and the tuple primes, handled uniformly.
struct OtherPlacesSummary {
  std::vector<Prime> bad_reduction;  // primes dividing 3 p u v (u - 3v) k
  bool pass = false;
  std::string detail;
};

struct MembershipCertificate {
  std::uint32_t p = 0;
  ResidueClass twist{5};
  std::vector<Prime> critical;  // U and the tuple primes, ascending
  std::vector<PlaceReport> reports;  // archimedean first, then `critical` in order
  std::vector<LocalGenerators> generators;  // one per torsion-combination place
  OtherPlacesSummary others;

  bool pass() const;
  /// First failing place, or empty.
  std::string first_failure() const;
};

/// Places split as: archimedean; l outside U and the tuple (valuation test);
/// l in U, or l = p_j not dividing q (residue symbol); l = p_i dividing q
/// (torsion combination a D0 + b D1 with d^D(a D0 + b D1) = q locally).
/// Throws ParameterError if q has a prime factor outside the tuple.
MembershipCertificate verify_membership(const ResidueClass& q, const CurveFamily& curve,
                                        const AdmissibleTuple& tuple);

/// d^D(witness) localized at `place` (base 3) equals `target`.
bool witness_round_trips(const TorsionElement& witness, const LocalClass& target, const CurveFamily& curve,
                         Prime place);

}  // namespace hasse
