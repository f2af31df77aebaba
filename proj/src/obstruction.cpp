#include "hasse/obstruction.hpp"

#include <algorithm>

namespace hasse {

namespace {

struct RowBuilder {
  std::vector<std::vector<std::pair<std::size_t, long long>>> rows;
  std::vector<std::string> labels;
  std::vector<long long> rhs;

  void add(std::string label, std::vector<std::pair<std::size_t, long long>> coeffs, long long b) {
    labels.push_back(std::move(label));
    rows.push_back(std::move(coeffs));
    rhs.push_back(b);
  }
};

GluingSystem assemble(std::uint32_t p, std::uint32_t t, bool free_targets, const std::vector<std::uint32_t>& eps,
                      std::optional<std::uint32_t> ratio) {
  GluingSystem s;
  s.p = p;
  s.t = t;
  s.targets = eps;
  s.ratio_index = ratio;
  for (std::uint32_t i = 1; i <= t; ++i)
    for (const char* name : {"alpha_", "beta_", "a_", "b_"}) s.unknowns.push_back(name + std::to_string(i));
  s.unknowns.push_back("c");
  s.unknowns.push_back("d");
  const std::size_t c = 4 * t;
  const std::size_t d = 4 * t + 1;
  if (free_targets)
    for (std::uint32_t i = 1; i <= t; ++i) s.unknowns.push_back("eps_" + std::to_string(i));

  RowBuilder rb;
  for (std::uint32_t i = 0; i < t; ++i) {
    const std::size_t al = 4 * i, be = al + 1, a = al + 2, b = al + 3;
    const std::string n = std::to_string(i + 1);
    rb.add("valuation_r1_" + n, {{a, 1}, {al, 2}, {be, -1}}, 0);   // a_i = -2 alpha_i + beta_i
    rb.add("valuation_r2_" + n, {{b, 1}, {al, -1}, {be, 2}}, 0);   // b_i = alpha_i - 2 beta_i
    rb.add("gluing_r1_" + n, {{c, 1}, {al, 3}, {be, -1}}, 0);      // c = -3 alpha_i + beta_i
    rb.add("gluing_r2_" + n, {{d, 1}, {al, -1}, {be, 2}}, 0);      // d = alpha_i - 2 beta_i
    if (free_targets)
      rb.add("target_" + n, {{a, 1}, {b, 1}, {4 * t + 2 + i, -1}}, 0);
    else
      rb.add("target_" + n, {{a, 1}, {b, 1}}, eps[i]);
  }
  rb.add("target_3", {{c, 1}, {d, 1}}, 0);
  if (ratio) {
    rb.add("ratio_eps_1", {{4 * t + 2, 1}}, 0);
    rb.add("ratio_eps_" + std::to_string(*ratio), {{4 * t + 2 + (*ratio - 1), 1}}, 1);
  }

  s.row_labels = rb.labels;
  s.matrix = fp::Matrix(rb.rows.size(), s.unknowns.size(), p);
  for (std::size_t r = 0; r < rb.rows.size(); ++r)
    for (const auto& [col, coeff] : rb.rows[r]) s.matrix.set(r, col, coeff);
  for (long long b : rb.rhs) s.rhs.push_back(fp::reduce(b, p));
  return s;
}

}  // namespace

GluingSystem GluingSystem::for_exponents(std::uint32_t p, const std::vector<std::uint32_t>& eps) {
  require_odd_prime_exponent(p);
  std::vector<std::uint32_t> reduced;
  for (std::uint32_t e : eps) reduced.push_back(e % p);
  return assemble(p, static_cast<std::uint32_t>(eps.size()), false, reduced, std::nullopt);
}

GluingSystem GluingSystem::for_ratio(std::uint32_t p, std::uint32_t t, std::uint32_t j) {
  require_odd_prime_exponent(p);
  if (t < 2 || j < 2 || j > t) throw ParameterError("ratio system needs 2 <= j <= t");
  return assemble(p, t, true, {}, j);
}

std::size_t GluingSystem::unknown_index(const std::string& name) const {
  auto it = std::find(unknowns.begin(), unknowns.end(), name);
  if (it == unknowns.end()) throw ParameterError("no unknown named " + name);
  return static_cast<std::size_t>(it - unknowns.begin());
}

const char* verdict_name(Verdict v) { return v == Verdict::feasible ? "feasible" : "infeasible"; }

bool ObstructionCertificate::recheck() const {
  if (verdict == Verdict::feasible) return fp::satisfies(system.matrix, system.rhs, solution);
  return fp::refutes(system.matrix, system.rhs, witness);
}

bool support_check(const std::vector<Prime>& support, const std::vector<Prime>& ramified,
                   const std::vector<Prime>& tuple_primes) {
  auto has = [](const std::vector<Prime>& v, Prime x) { return std::find(v.begin(), v.end(), x) != v.end(); };
  return std::all_of(support.begin(), support.end(),
                     [&](Prime r) { return has(ramified, r) || has(tuple_primes, r); });
}

ObstructionCertificate decide(GluingSystem system) {
  ObstructionCertificate cert;
  const fp::Solution sol = fp::solve(system.matrix, system.rhs);
  cert.system = std::move(system);
  const auto& s = cert.system;
  if (sol.feasible) {
    cert.verdict = Verdict::feasible;
    cert.solution = sol.x;
  } else {
    cert.verdict = Verdict::infeasible;
    cert.witness = sol.y;
  }

  if (s.ratio_index) {
    const std::string j = std::to_string(*s.ratio_index);
    cert.narrative = cert.verdict == Verdict::infeasible
                         ? "no element of the global image has exponent 0 at p_1 and 1 at p_" + j
                         : "the local data admit an image element with exponent 0 at p_1 and 1 at p_" + j;
    return cert;
  }
  const bool constant = std::adjacent_find(s.targets.begin(), s.targets.end(), std::not_equal_to<>()) ==
                        s.targets.end();
  if (cert.verdict == Verdict::infeasible)
    cert.narrative = "gluing through the exponents of 3 forces every p_i-exponent of r1 r2 to coincide; "
                     "q is divisible by some but not all tuple primes to a common power, so q is not in the "
                     "image of d^D";
  else if (constant)
    cert.narrative = "q is divisible by all or none of the tuple primes to a common power; the local data "
                     "do not exclude it from the image of d^D";
  else
    cert.narrative = "the gluing rows do not couple the tuple primes for this p; the local data do not "
                     "exclude q from the image of d^D";
  return cert;
}

ObstructionCertificate check_infeasibility(const ResidueClass& q, const CurveFamily& curve,
                                           const AdmissibleTuple& tuple) {
  if (q.p() != curve.p() || tuple.params.p != curve.p()) throw ParameterError("mismatched p");
  if (!support_check(q.support(), {}, tuple.primes))
    throw ParameterError("twist " + q.to_string() + " is not supported on the tuple primes");
  std::vector<std::uint32_t> eps;
  for (Prime r : tuple.primes) eps.push_back(q.exponent(r));
  return decide(GluingSystem::for_exponents(curve.p(), eps));
}

ShaBound sha_lower_bound(const CurveFamily& curve, const AdmissibleTuple& tuple) {
  const std::uint32_t p = curve.p();
  const std::uint32_t t = static_cast<std::uint32_t>(tuple.primes.size());
  if (t == 0) throw ParameterError("sha_lower_bound needs t >= 1");
  ShaBound out;
  for (std::uint32_t i = 0; i < t; ++i) {
    const Prime pi = tuple.primes[i];
    auto m = verify_membership(ResidueClass::from_exponents(p, {{pi, 1}}), curve, tuple);
    if (!m.pass())
      throw BoundNotEstablished("p_" + std::to_string(i + 1) + " = " + std::to_string(pi) +
                                " is not locally soluble: " + m.first_failure());
    out.memberships.push_back(std::move(m));
  }
  out.derivation.push_back("each p_i lies in Sel(B_k): " + std::to_string(t) + " membership certificates");

  if (t >= 2) {
    for (std::uint32_t i = 0; i < t; ++i)
      for (std::uint32_t a = 1; a < p; ++a) {
        auto q = ResidueClass::from_exponents(p, {{tuple.primes[i], a}});
        auto cert = check_infeasibility(q, curve, tuple);
        if (cert.verdict != Verdict::infeasible)
          throw BoundNotEstablished("q = " + q.to_string() + " (proper support) is not excluded: " + cert.narrative);
        out.powers.push_back(std::move(cert));
      }
    out.derivation.push_back("p_i^a is not in the image of d^D for every i and 1 <= a <= p-1: " +
                             std::to_string(out.powers.size()) + " infeasibility certificates");
    for (std::uint32_t j = 2; j <= t; ++j) {
      auto cert = decide(GluingSystem::for_ratio(p, t, j));
      if (cert.verdict != Verdict::infeasible)
        throw BoundNotEstablished("ratio system for p_" + std::to_string(j) + " is feasible: " + cert.narrative);
      out.ratios.push_back(std::move(cert));
    }
    out.derivation.push_back(
        "no nonzero image element has p_1-exponent 0 (" + std::to_string(t - 1) +
        " ratio certificates), so two independent image elements, scaled to p_1-exponent 1, "
        "would have a nonzero ratio prime to p_1; the image meets <p_1, ..., p_t> in dimension <= 1");
  }
  out.bound = t - 1;
  out.derivation.push_back("dim Sha(B_k)[psi] >= " + std::to_string(t) + " - 1 = " + std::to_string(out.bound) +
                           ", and Sha(B_k)[psi] is contained in Sha(B_k)[p]");
  return out;
}

}  // namespace hasse
