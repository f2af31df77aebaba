#pragma once

// Global non-membership of a twist q in the image of d^D, as a linear system
// over F_p. A global [r1, r2] in the image of d^H must, at every tuple prime
// p_i, be alpha_i [D0] + beta_i [D1] in local coordinates. The p_i-adic
// valuations of r1 and r2 are then
//     a_i = -2 alpha_i + beta_i,   b_i = alpha_i - 2 beta_i,
// and the base-3 unit indices, which are the exponents c, d of 3 in r1, r2
// and therefore shared by every i, are
//     c = -3 alpha_i + beta_i,     d = alpha_i - 2 beta_i.
// q = r1 r2 forces a_i + b_i = eps_i (the exponent of p_i in q) and c + d = 0.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hasse/descent.hpp"
#include "hasse/errors.hpp"
#include "hasse/fp_linalg.hpp"
#include "hasse/local.hpp"
#include "hasse/search.hpp"

namespace hasse {

struct GluingSystem {
  std::uint32_t p = 0;
  std::uint32_t t = 0;
  /// Fixed exponents eps_i, or empty when they are unknowns.
  std::vector<std::uint32_t> targets;
  /// For ratio systems: eps_1 = 0 and eps_j = 1 are appended (j is 1-based).
  std::optional<std::uint32_t> ratio_index;

  std::vector<std::string> unknowns;
  std::vector<std::string> row_labels;
  fp::Matrix matrix;
  std::vector<std::uint32_t> rhs;

  /// Unknowns alpha_i, beta_i, a_i, b_i (i = 1..t), then c, d.
  static GluingSystem for_exponents(std::uint32_t p, const std::vector<std::uint32_t>& eps);
  /// The homogeneous system with eps_1..eps_t as extra unknowns plus rows
  /// eps_1 = 0, eps_j = 1. Infeasible iff no image element has p_1-exponent 0
  /// and p_j-exponent 1.
  static GluingSystem for_ratio(std::uint32_t p, std::uint32_t t, std::uint32_t j);

  std::size_t unknown_index(const std::string& name) const;
};

enum class Verdict { feasible, infeasible };
const char* verdict_name(Verdict v);

struct ObstructionCertificate {
  GluingSystem system;
  Verdict verdict = Verdict::feasible;
  std::vector<std::uint32_t> solution;  // when feasible
  std::vector<std::uint32_t> witness;   // left-kernel refutation, when infeasible
  std::string narrative;

  /// Substitution or refutation re-check against `system`.
  bool recheck() const;
};

/// True iff `support` lies in U together with the tuple primes.
bool support_check(const std::vector<Prime>& support, const std::vector<Prime>& ramified,
                   const std::vector<Prime>& tuple_primes);

ObstructionCertificate decide(GluingSystem system);

/// Throws ParameterError if q has a prime factor outside the tuple.
ObstructionCertificate check_infeasibility(const ResidueClass& q, const CurveFamily& curve,
                                           const AdmissibleTuple& tuple);

class BoundNotEstablished : public CertificateFailure {
 public:
  using CertificateFailure::CertificateFailure;
};

struct ShaBound {
  std::uint32_t bound = 0;  // #Sha(B_k)[p] >= p^bound
  std::vector<MembershipCertificate> memberships;   // q = p_i
  std::vector<ObstructionCertificate> ratios;       // j = 2..t
  std::vector<ObstructionCertificate> powers;       // q = p_i^a, a = 1..p-1 (t >= 2)
  std::vector<std::string> derivation;
};

/// bound = t - 1: every p_i is locally soluble, and no element of the image of
/// d^D inside <p_1, ..., p_t> has p_1-exponent 0 unless it is trivial, so the
/// intersection is at most one-dimensional. Throws BoundNotEstablished with
/// the failing certificate otherwise.
ShaBound sha_lower_bound(const CurveFamily& curve, const AdmissibleTuple& tuple);

}  // namespace hasse
