#include "hasse/certificate.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "hasse/errors.hpp"

#ifndef HASSE_GOLDEN_DIR
#define HASSE_GOLDEN_DIR "tests/golden"
#endif

namespace hasse {

namespace {

class SchemaError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

template <class T>
std::string dec(T x) {
  if constexpr (std::is_same_v<T, BigInt>)
    return x.get_str();
  else
    return std::to_string(x);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + " is not an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError("missing " + path + "/" + key);
  return *it;
}

template <class T>
T as_int(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path + " must be a decimal string");
  const std::string& s = j.get_ref<const std::string&>();
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw SchemaError(path + " = \"" + s + "\" is not a valid integer");
  return value;
}

template <class T>
T int_field(const Json& j, const char* key, const std::string& path) {
  return as_int<T>(field(j, key, path), path + "/" + key);
}

BigInt big_field(const Json& j, const char* key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_string()) throw SchemaError(path + "/" + key + " must be a decimal string");
  BigInt out;
  if (out.set_str(v.get<std::string>(), 10) != 0) throw SchemaError(path + "/" + key + " is not an integer");
  return out;
}

bool bool_field(const Json& j, const char* key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_boolean()) throw SchemaError(path + "/" + key + " must be a boolean");
  return v.get<bool>();
}

std::string string_field(const Json& j, const char* key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_string()) throw SchemaError(path + "/" + key + " must be a string");
  return v.get<std::string>();
}

const Json& array_field(const Json& j, const char* key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_array()) throw SchemaError(path + "/" + key + " must be an array");
  return v;
}

template <class T>
std::vector<T> int_array(const Json& j, const char* key, const std::string& path) {
  const Json& a = array_field(j, key, path);
  std::vector<T> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_int<T>(a[i], path + "/" + key + "/" + dec(i)));
  return out;
}

template <class T>
Json dec_array(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(dec(x));
  return a;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json metadata(std::vector<std::string> notes) {
  return Json{{"tool_version", kToolVersion}, {"generated_at", utc_now()}, {"notes", notes}};
}

Json local_class_json(const LocalClass& c) {
  return Json{{"valuation", dec(c.valuation)}, {"unit_index", dec(c.unit_index)}};
}

LocalClass local_class_from(const Json& j, std::uint32_t p, const std::string& path) {
  return LocalClass{p, int_field<std::uint32_t>(j, "valuation", path), int_field<std::uint32_t>(j, "unit_index", path)};
}

std::string symbol_text(Prime num, Prime place, std::uint32_t p) {
  return "(" + dec(num) + "/" + dec(place) + ")_" + dec(p);
}

ResidueClass prime_class(Prime r, std::uint32_t p) { return ResidueClass::from_exponents(p, {{r, 1}}); }

}  // namespace

// --- configuration ----------------------------------------------------------

void validate(const RunConfig& config) {
  validate(config.params);
  const std::uint32_t t = config.primes.empty() ? config.params.t : static_cast<std::uint32_t>(config.primes.size());
  std::set<std::uint32_t> seen;
  for (std::uint32_t i : config.subset) {
    if (i < 1 || i > t) throw ParameterError("subset index " + dec(i) + " is outside 1.." + dec(t));
    if (!seen.insert(i).second) throw ParameterError("subset index " + dec(i) + " is repeated");
  }
  if (!config.exponents.empty() && config.exponents.size() != config.subset.size())
    throw ParameterError("--exponents needs one exponent per subset index");
  for (std::uint32_t a : config.exponents)
    if (a < 1 || a >= config.params.p) throw ParameterError("exponent " + dec(a) + " is outside [1, p-1]");
}

ResidueClass twist_class(const AdmissibleTuple& tuple, const std::vector<std::uint32_t>& subset,
                         const std::vector<std::uint32_t>& exponents) {
  std::map<Prime, long long> exps;
  for (std::size_t n = 0; n < subset.size(); ++n) {
    const std::uint32_t i = subset[n];
    if (i < 1 || i > tuple.primes.size()) throw ParameterError("subset index " + dec(i) + " out of range");
    exps[tuple.primes[i - 1]] += exponents.empty() ? 1 : exponents.at(n);
  }
  return ResidueClass::from_exponents(tuple.params.p, exps);
}

// --- serialization ----------------------------------------------------------

Json to_json(const SearchParams& params) {
  return Json{{"p", dec(params.p)},         {"u", dec(params.u)},         {"v", dec(params.v)},
              {"t", dec(params.t)},         {"start", dec(params.start)}, {"limit", dec(params.limit)},
              {"strategy", strategy_name(params.strategy)}};
}

SearchParams params_from_json(const Json& j) {
  const std::string path = "/params";
  SearchParams s;
  s.p = int_field<std::uint32_t>(j, "p", path);
  s.u = int_field<std::int64_t>(j, "u", path);
  s.v = int_field<std::int64_t>(j, "v", path);
  s.t = int_field<std::uint32_t>(j, "t", path);
  s.start = int_field<std::uint64_t>(j, "start", path);
  s.limit = int_field<std::uint64_t>(j, "limit", path);
  s.strategy = parse_strategy(string_field(j, "strategy", path));
  return s;
}

Json to_json(const AdmissibleTuple& tuple) {
  Json evidence = Json::array();
  for (const auto& c : tuple.evidence)
    evidence.push_back(Json{{"condition", dec(c.condition)},
                            {"numerator", dec(c.numerator)},
                            {"place", dec(c.place)},
                            {"expected", dec(c.expected)},
                            {"outcome", dec(c.outcome)}});
  return Json{{"primes", dec_array(tuple.primes)},
              {"ramified_set", dec_array(tuple.ramified)},
              {"k", tuple.k().get_str()},
              {"evidence", evidence}};
}

Json to_json(const ResidueClass& q) {
  Json factors = Json::object();
  for (const auto& [r, e] : q.factors()) factors[dec(r)] = dec(e);
  return Json{{"factors", factors}, {"representative", q.representative().get_str()}};
}

Json to_json(const TorsorEquations& eqs) {
  Json lines = Json::array();
  for (const auto& e : eqs.equations) lines.push_back(e.text());
  return Json{{"p", dec(eqs.p)}, {"e1", eqs.e1.get_str()}, {"e2", eqs.e2.get_str()}, {"lines", lines}};
}

Json to_json(const MembershipCertificate& cert) {
  Json reports = Json::array();
  for (const auto& r : cert.reports) {
    Json j{{"place", r.place.to_string()}, {"case", place_case_name(r.kind)}, {"pass", r.pass}, {"detail", r.detail}};
    if (r.kind == PlaceCase::local_pth_power) j["symbol"] = dec(r.symbol);
    if (r.witness) j["witness"] = Json{{"a", dec(r.witness->a)}, {"b", dec(r.witness->b)}};
    if (r.target) j["target"] = local_class_json(*r.target);
    reports.push_back(j);
  }
  Json gens = Json::array();
  for (const auto& g : cert.generators)
    gens.push_back(Json{{"place", dec(g.place)},
                        {"d0", Json::array({local_class_json(g.d0[0]), local_class_json(g.d0[1])})},
                        {"d1", Json::array({local_class_json(g.d1[0]), local_class_json(g.d1[1])})},
                        {"minor", dec(g.minor)}});
  return Json{{"twist", to_json(cert.twist)},
              {"pass", cert.pass()},
              {"critical", dec_array(cert.critical)},
              {"reports", reports},
              {"generators", gens},
              {"others", Json{{"bad_reduction", dec_array(cert.others.bad_reduction)},
                              {"pass", cert.others.pass},
                              {"detail", cert.others.detail}}}};
}

Json to_json(const ObstructionCertificate& cert) {
  const auto& s = cert.system;
  Json rows = Json::array();
  for (std::size_t r = 0; r < s.matrix.rows(); ++r) {
    Json coeffs = Json::array();
    for (std::size_t c = 0; c < s.matrix.cols(); ++c) coeffs.push_back(dec(s.matrix.at(r, c)));
    rows.push_back(Json{{"label", s.row_labels[r]}, {"coefficients", coeffs}, {"rhs", dec(s.rhs[r])}});
  }
  Json j{{"p", dec(s.p)},
         {"t", dec(s.t)},
         {"unknowns", s.unknowns},
         {"rows", rows},
         {"verdict", verdict_name(cert.verdict)},
         {"narrative", cert.narrative}};
  if (s.ratio_index)
    j["ratio_index"] = dec(*s.ratio_index);
  else
    j["targets"] = dec_array(s.targets);
  if (cert.verdict == Verdict::feasible)
    j["solution"] = dec_array(cert.solution);
  else
    j["witness"] = dec_array(cert.witness);
  return j;
}

Json to_json(const ShaBound& bound) {
  Json mem = Json::array(), pw = Json::array(), ra = Json::array();
  for (const auto& m : bound.memberships) mem.push_back(to_json(m));
  for (const auto& c : bound.powers) pw.push_back(to_json(c));
  for (const auto& c : bound.ratios) ra.push_back(to_json(c));
  return Json{{"established", true}, {"bound", dec(bound.bound)}, {"derivation", bound.derivation},
              {"memberships", mem},  {"powers", pw},                {"ratios", ra}};
}

Json assumed_lemmas(const AdmissibleTuple& tuple) {
  const std::uint32_t p = tuple.params.p;
  const bool congruent =
      std::all_of(tuple.primes.begin(), tuple.primes.end(), [p](Prime r) { return r % p == 1; });
  const bool coprime = tuple.params.u % 3 != 0 && tuple.params.v % 3 != 0;
  return Json::array(
      {Json{{"name", "local-image-order"},
            {"statement", "the local image of d^D at each p_i has order p^2, via the ratio of Tamagawa "
                          "numbers c_q(J)/c_q(A)"},
            {"hypotheses", Json::array({Json{{"name", "p_i = 1 mod p"}, {"holds", congruent}}})}},
       Json{{"name", "absolute-simplicity"},
            {"statement", "the Jacobian of the curve is absolutely simple for suitable u, v (Masser "
                          "specialization)"},
            {"hypotheses", Json::array({Json{{"name", "3 does not divide uv"}, {"holds", coprime}}})}},
       Json{{"name", "sha-group"},
            {"statement", "Sha(B_k) itself is not computed; the bound is on its p-torsion through the "
                          "Selmer image"},
            {"hypotheses", Json::array()}}});
}

std::string canonical_dump(const Json& cert) { return cert.dump(2) + "\n"; }

Json payload(const Json& cert) {
  Json out = cert;
  if (out.is_object()) out.erase("metadata");
  return out;
}

namespace {

std::optional<std::string> diff_at(const Json& a, const Json& b, const std::string& path) {
  if (a.type() != b.type()) return path.empty() ? "/" : path;
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      const std::string sub = path + "/" + it.key();
      if (!b.contains(it.key())) return sub;
      if (auto d = diff_at(*it, b.at(it.key()), sub)) return d;
    }
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key())) return path + "/" + it.key();
    return std::nullopt;
  }
  if (a.is_array()) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
      if (auto d = diff_at(a[i], b[i], path + "/" + dec(i))) return d;
    if (a.size() != b.size()) return path + "/" + dec(n);
    return std::nullopt;
  }
  if (a != b) return path.empty() ? "/" : path;
  return std::nullopt;
}

}  // namespace

std::optional<std::string> first_difference(const Json& a, const Json& b) { return diff_at(a, b, ""); }

// --- construction -----------------------------------------------------------

Json search_certificate(const AdmissibleTuple& tuple, const SearchStats* stats) {
  std::vector<std::string> notes;
  if (stats)
    notes.push_back("scanned " + dec(stats->candidates) + " candidates, " + dec(stats->probable) +
                    " probable primes, " + dec(stats->singletons) + " admissible singletons (" + stats->isa +
                    " kernels)");
  return Json{{"schema", kSchema},
              {"kind", "search"},
              {"metadata", metadata(notes)},
              {"params", to_json(tuple.params)},
              {"tuple", to_json(tuple)},
              {"assumed_lemmas", assumed_lemmas(tuple)},
              {"verdict", "admissible-tuple"}};
}

BuildOutcome build_certificate(const AdmissibleTuple& tuple, const std::vector<std::uint32_t>& subset,
                               const std::vector<std::uint32_t>& exponents, const std::string& kind) {
  const auto& params = tuple.params;
  const CurveFamily curve = CurveFamily::make(params.p, params.u, params.v, tuple.primes);
  const ResidueClass q = twist_class(tuple, subset, exponents);
  const TorsorEquations eqs = emit_models(curve, q);
  const MembershipCertificate mem = verify_membership(q, curve, tuple);
  const ObstructionCertificate obs = check_infeasibility(q, curve, tuple);

  Json sha;
  try {
    sha = to_json(sha_lower_bound(curve, tuple));
  } catch (const BoundNotEstablished& e) {
    sha = Json{{"established", false}, {"reason", e.what()}};
  }

  BuildOutcome out;
  if (!mem.pass()) {
    out.verdict = "not-locally-soluble";
    out.exit_code = exit_certificate;
    out.failure = mem.first_failure();
  } else if (q.is_identity()) {
    out.verdict = "trivial-class";
  } else if (obs.verdict == Verdict::infeasible) {
    out.verdict = "order-p-in-sha";
  } else {
    out.verdict = "not-certified-nontrivial";
  }

  std::vector<std::uint32_t> exps = exponents;
  if (exps.empty()) exps.assign(subset.size(), 1);
  std::vector<std::string> notes;
  if (kind == "paper-example")
    notes.push_back("(u, v) = (1, -1) is inferred from the printed model y^29 = x(x - 3k')(x + 9k')");
  if (out.verdict == "order-p-in-sha")
    notes.push_back("the obstruction system is linear in eps, so every nonzero power of q is excluded as well");

  out.certificate = Json{{"schema", kSchema},
                         {"kind", kind},
                         {"metadata", metadata(notes)},
                         {"params", to_json(params)},
                         {"tuple", to_json(tuple)},
                         {"twist", Json{{"subset", dec_array(subset)}, {"exponents", dec_array(exps)},
                                        {"class", to_json(q)}}},
                         {"equations", to_json(eqs)},
                         {"membership", to_json(mem)},
                         {"obstruction", to_json(obs)},
                         {"sha_bound", sha},
                         {"assumed_lemmas", assumed_lemmas(tuple)},
                         {"verdict", out.verdict}};
  return out;
}

// --- verification -----------------------------------------------------------

namespace {

struct Checker {
  std::vector<std::string>& failures;

  void fail(const std::string& path, const std::string& msg) { failures.push_back(path + ": " + msg); }

  void evidence(const Json& tuple, const std::vector<Prime>& primes, const std::vector<Prime>& ramified,
                std::uint32_t p) {
    const std::string path = "/tuple/evidence";
    const Json& ev = array_field(tuple, "evidence", "/tuple");
    std::set<std::tuple<int, Prime, Prime, int>> seen;
    for (std::size_t i = 0; i < ev.size(); ++i) {
      const std::string at = path + "/" + dec(i);
      const int cond = int_field<int>(ev[i], "condition", at);
      const Prime num = int_field<Prime>(ev[i], "numerator", at);
      const Prime place = int_field<Prime>(ev[i], "place", at);
      const int expected = int_field<int>(ev[i], "expected", at);
      const int outcome = int_field<int>(ev[i], "outcome", at);
      const int symbol = residue_symbol(prime_class(num, p), LocalPlace::finite(place), p);
      if (symbol != outcome)
        fail(at + "/outcome", "recorded " + dec(outcome) + ", recomputed " + dec(symbol) + " for " +
                                  symbol_text(num, place, p));
      if (expected != outcome)
        fail(at, "condition (" + dec(cond) + ") " + symbol_text(num, place, p) + " expected " + dec(expected));
      seen.insert({cond, num, place, expected});
    }
    std::set<std::tuple<int, Prime, Prime, int>> want;
    for (const auto& c : build_evidence(primes, ramified, p)) want.insert({c.condition, c.numerator, c.place, c.expected});
    if (seen != want) fail(path, "entries do not cover conditions (1)-(4) for the tuple exactly");
  }

  void membership(const Json& m, const std::string& path, const ResidueClass& q, const CurveFamily& curve,
                  const std::vector<Prime>& critical) {
    const std::uint32_t p = curve.p();
    const Json& reports = array_field(m, "reports", path);
    bool all = true;
    std::vector<Prime> covered;
    bool arch = false;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const std::string at = path + "/reports/" + dec(i);
      const Json& r = reports[i];
      const std::string place = string_field(r, "place", at);
      const std::string kind = string_field(r, "case", at);
      const bool pass = bool_field(r, "pass", at);
      bool recomputed = false;
      if (place == "inf") {
        arch = true;
        recomputed = kind == "archimedean-trivial";
      } else {
        const Prime ell = as_int<Prime>(field(r, "place", at), at + "/place");
        covered.push_back(ell);
        if (kind == "local-pth-power") {
          const int sym = int_field<int>(r, "symbol", at);
          const int again = residue_symbol(q, LocalPlace::finite(ell), p);
          if (sym != again)
            fail(at + "/symbol", "recorded " + dec(sym) + ", recomputed " + dec(again) + " for (q/" + dec(ell) + ")_" +
                                     dec(p));
          recomputed = again == 1;
        } else if (kind == "torsion-combination") {
          if (r.contains("witness") && r.contains("target")) {
            const Json& w = r.at("witness");
            const auto wit = TorsionElement::make(p, int_field<long long>(w, "a", at + "/witness"),
                                                  int_field<long long>(w, "b", at + "/witness"));
            const LocalClass target = local_class_from(r.at("target"), p, at + "/target");
            if (target != local_class(q, ell, p, kGluingPrime))
              fail(at + "/target", "does not match the local class of q at " + dec(ell));
            else if (!witness_round_trips(wit, target, curve, ell))
              fail(at + "/witness", "d^D(witness) does not reproduce q locally at " + dec(ell));
            else
              recomputed = true;
          }
        } else {
          fail(at + "/case", "unknown place case " + kind);
        }
      }
      if (pass != recomputed)
        fail(at + "/pass", std::string("recorded ") + (pass ? "pass" : "fail") + ", recomputed " +
                               (recomputed ? "pass" : "fail"));
      all = all && recomputed;
    }
    if (!arch) fail(path + "/reports", "archimedean place missing");
    if (covered != critical) fail(path + "/reports", "places do not cover U and the tuple primes");
    const Json& others = field(m, "others", path);
    all = all && bool_field(others, "pass", path + "/others");
    if (bool_field(m, "pass", path) != all) fail(path + "/pass", "does not match the per-place results");
  }

  void obstruction(const Json& o, const std::string& path) {
    const std::uint32_t p = int_field<std::uint32_t>(o, "p", path);
    const Json& rows = array_field(o, "rows", path);
    const std::size_t n = array_field(o, "unknowns", path).size();
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw SchemaError(path + "/p is not prime");
    fp::Matrix a(rows.size(), n, p);
    std::vector<std::uint32_t> b;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string at = path + "/rows/" + dec(r);
      const auto coeffs = int_array<long long>(rows[r], "coefficients", at);
      if (coeffs.size() != n) throw SchemaError(at + "/coefficients has the wrong length");
      for (std::size_t c = 0; c < n; ++c) a.set(r, c, coeffs[c]);
      b.push_back(fp::reduce(int_field<long long>(rows[r], "rhs", at), p));
    }
    const std::string verdict = string_field(o, "verdict", path);
    if (verdict == "feasible") {
      const auto x = int_array<std::uint32_t>(o, "solution", path);
      if (!fp::satisfies(a, b, x)) fail(path + "/solution", "substitution re-check failed: A x != b");
    } else if (verdict == "infeasible") {
      const auto y = int_array<std::uint32_t>(o, "witness", path);
      if (!fp::refutes(a, b, y)) fail(path + "/witness", "refutation re-check failed: y A != 0 or y . b = 0");
    } else {
      fail(path + "/verdict", "unknown verdict " + verdict);
    }
  }
};

}  // namespace

VerifyResult verify_certificate(const Json& cert) {
  VerifyResult res;
  Checker ck{res.failures};
  try {
    if (!cert.is_object()) throw SchemaError("certificate is not a JSON object");
    if (string_field(cert, "schema", "") != kSchema) throw SchemaError("/schema is not " + std::string(kSchema));
    const std::string kind = string_field(cert, "kind", "");
    if (kind != "search" && kind != "build" && kind != "paper-example") throw SchemaError("/kind " + kind + " is unknown");

    const SearchParams params = params_from_json(field(cert, "params", ""));
    validate(params);
    const std::uint32_t p = params.p;
    const Json& tj = field(cert, "tuple", "");
    const auto primes = int_array<Prime>(tj, "primes", "/tuple");
    const auto ramified = int_array<Prime>(tj, "ramified_set", "/tuple");
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (primes[i] < 2 || !is_prime(primes[i])) throw SchemaError("/tuple/primes/" + dec(i) + " is not prime");
    if (ramified != build_ramified_set(p, params.u, params.v))
      ck.fail("/tuple/ramified_set", "does not equal the primes dividing 3puv(u-3v)");
    BigInt k = 1;
    for (Prime r : primes) k *= BigInt(dec(r));
    if (big_field(tj, "k", "/tuple") != k) ck.fail("/tuple/k", "is not the product of the tuple primes");
    ck.evidence(tj, primes, ramified, p);

    const Json& lemmas = array_field(cert, "assumed_lemmas", "");
    for (std::size_t i = 0; i < lemmas.size(); ++i) {
      const Json& hyps = array_field(lemmas[i], "hypotheses", "/assumed_lemmas/" + dec(i));
      for (std::size_t h = 0; h < hyps.size(); ++h)
        if (!bool_field(hyps[h], "holds", "/assumed_lemmas/" + dec(i) + "/hypotheses/" + dec(h)))
          ck.fail("/assumed_lemmas/" + dec(i), "hypothesis " + hyps[h].value("name", "?") + " fails");
    }

    Json regenerated;
    if (kind == "search") {
      if (!res.failures.empty()) throw CertificateFailure(res.failures.front());
      AdmissibleTuple tuple = hasse::make_tuple(params, primes);
      regenerated = search_certificate(tuple);
    } else {
      const Json& tw = field(cert, "twist", "");
      const auto subset = int_array<std::uint32_t>(tw, "subset", "/twist");
      const auto exps = int_array<std::uint32_t>(tw, "exponents", "/twist");
      RunConfig rc;
      rc.params = params;
      rc.primes = primes;
      rc.subset = subset;
      rc.exponents = exps;
      validate(rc);
      if (!res.failures.empty()) throw CertificateFailure(res.failures.front());
      const AdmissibleTuple tuple = hasse::make_tuple(params, primes);
      const CurveFamily curve = CurveFamily::make(p, params.u, params.v, primes);
      const ResidueClass q = twist_class(tuple, subset, exps);
      std::set<Prime> crit(ramified.begin(), ramified.end());
      crit.insert(primes.begin(), primes.end());
      const std::vector<Prime> critical(crit.begin(), crit.end());

      ck.membership(field(cert, "membership", ""), "/membership", q, curve, critical);
      ck.obstruction(field(cert, "obstruction", ""), "/obstruction");
      const Json& sha = field(cert, "sha_bound", "");
      if (bool_field(sha, "established", "/sha_bound")) {
        const Json& mems = array_field(sha, "memberships", "/sha_bound");
        for (std::size_t i = 0; i < mems.size() && i < primes.size(); ++i)
          ck.membership(mems[i], "/sha_bound/memberships/" + dec(i), prime_class(primes[i], p), curve, critical);
        for (const char* key : {"powers", "ratios"}) {
          const Json& arr = array_field(sha, key, "/sha_bound");
          for (std::size_t i = 0; i < arr.size(); ++i)
            ck.obstruction(arr[i], "/sha_bound/" + std::string(key) + "/" + dec(i));
        }
        if (int_field<std::uint32_t>(sha, "bound", "/sha_bound") + 1 != primes.size())
          ck.fail("/sha_bound/bound", "is not t - 1");
      }
      regenerated = build_certificate(tuple, subset, exps, kind).certificate;
    }

    if (auto d = first_difference(payload(cert), payload(regenerated)))
      ck.fail(*d, "differs from the value regenerated from params, primes and twist");
  } catch (const SchemaError& e) {
    res.failures.push_back(std::string("schema: ") + e.what());
    res.exit_code = exit_parameter;
    return res;
  } catch (const Json::exception& e) {
    res.failures.push_back(std::string("schema: ") + e.what());
    res.exit_code = exit_parameter;
    return res;
  } catch (const CertificateFailure& e) {
    if (res.failures.empty()) res.failures.push_back(e.what());
  } catch (const std::exception& e) {
    res.failures.push_back(std::string("invalid certificate content: ") + e.what());
  }
  res.exit_code = res.failures.empty() ? exit_ok : exit_certificate;
  return res;
}

// --- commands ---------------------------------------------------------------

std::string default_golden_path() { return std::string(HASSE_GOLDEN_DIR) + "/paper_example_p29.txt"; }

namespace {

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

std::string abbreviate(const std::string& s) { return s.size() <= 160 ? s : s.substr(0, 157) + "..."; }

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f << text;
  return static_cast<bool>(f);
}

int emit(const Json& cert, const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string text = canonical_dump(cert);
  if (config.out_path.empty()) {
    out << text;
    return exit_ok;
  }
  if (!write_file(config.out_path, text)) {
    err << "error: cannot write " << config.out_path << "\n";
    return exit_io;
  }
  if (!config.quiet) out << "wrote " << config.out_path << "\n";
  return exit_ok;
}

std::string join(const std::vector<Prime>& v) {
  std::string s;
  for (Prime x : v) s += (s.empty() ? "" : ", ") + dec(x);
  return s;
}

}  // namespace

std::string diff_equations(const std::string& golden_text, const std::string& rendered) {
  const auto want = content_lines(golden_text);
  const auto got = content_lines(rendered);
  std::ostringstream d;
  const std::size_t n = std::max(want.size(), got.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string* w = i < want.size() ? &want[i] : nullptr;
    const std::string* g = i < got.size() ? &got[i] : nullptr;
    if (w && g && *w == *g) continue;
    d << "@@ equation " << i + 1 << " @@\n";
    if (w) d << "- " << abbreviate(*w) << "\n";
    if (g) d << "+ " << abbreviate(*g) << "\n";
  }
  return d.str();
}

int cmd_search(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config.params);
    SearchStats stats;
    const AdmissibleTuple tuple = search_tuple(config.params, &stats);
    if (!config.quiet && !config.out_path.empty())
      out << "tuple: " << join(tuple.primes) << "  (U = {" << join(tuple.ramified) << "})\n";
    return emit(search_certificate(tuple, &stats), config, out, err);
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return exit_parameter;
  } catch (const SearchExhausted& e) {
    err << "search exhausted: " << e.what() << "\n";
    return exit_exhausted;
  }
}

namespace {

AdmissibleTuple obtain_tuple(RunConfig& config, std::ostream& err, int& code) {
  code = exit_ok;
  if (!config.tuple_path.empty()) {
    std::string text;
    if (!read_file(config.tuple_path, text)) {
      err << "error: cannot read " << config.tuple_path << "\n";
      code = exit_io;
      return {};
    }
    const Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SchemaError(config.tuple_path + " is not valid JSON");
    const VerifyResult vr = verify_certificate(j);
    if (!vr.ok()) {
      err << "tuple file does not verify: " << vr.failures.front() << "\n";
      code = vr.exit_code;
      return {};
    }
    config.params = params_from_json(j.at("params"));
    config.primes = int_array<Prime>(j.at("tuple"), "primes", "/tuple");
  }
  if (!config.primes.empty()) {
    config.params.t = static_cast<std::uint32_t>(config.primes.size());
    validate(config);
    return hasse::make_tuple(config.params, config.primes);
  }
  validate(config);
  return search_tuple(config.params);
}

}  // namespace

int cmd_build(const RunConfig& config_in, std::ostream& out, std::ostream& err) {
  RunConfig config = config_in;
  try {
    int code = exit_ok;
    const AdmissibleTuple tuple = obtain_tuple(config, err, code);
    if (code != exit_ok) return code;
    const BuildOutcome res = build_certificate(tuple, config.subset, config.exponents);
    if (!config.quiet && !config.out_path.empty()) {
      out << "q = " << twist_class(tuple, config.subset, config.exponents).to_string() << "\n";
      out << "verdict: " << res.verdict << "\n";
    }
    if (!res.failure.empty()) err << "certificate failure: " << res.failure << "\n";
    const int wrote = emit(res.certificate, config, out, err);
    return res.exit_code != exit_ok ? res.exit_code : wrote;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return exit_parameter;
  } catch (const SearchExhausted& e) {
    err << "search exhausted: " << e.what() << "\n";
    return exit_exhausted;
  } catch (const CertificateFailure& e) {
    err << "certificate failure: " << e.what() << "\n";
    return exit_certificate;
  }
}

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  std::string text;
  if (!read_file(path, text)) {
    err << "error: cannot read " << path << "\n";
    return exit_io;
  }
  const Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    err << "schema: " << path << " is not valid JSON\n";
    return exit_parameter;
  }
  const VerifyResult res = verify_certificate(j);
  if (res.ok()) {
    out << "ok: " << path << " (" << j.value("kind", "?") << ", verdict " << j.value("verdict", "?") << ")\n";
    return exit_ok;
  }
  for (const auto& f : res.failures) err << "FAIL " << f << "\n";
  return res.exit_code;
}

int cmd_paper_example(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string golden_path = config.golden_path.empty() ? default_golden_path() : config.golden_path;
  std::string golden;
  if (!read_file(golden_path, golden)) {
    err << "error: cannot read golden rendering " << golden_path << "\n";
    return exit_io;
  }
  SearchParams params;
  params.p = kExampleP;
  params.u = kExampleU;
  params.v = kExampleV;
  params.t = 2;

  bool ok = true;
  auto line = [&](bool pass, const std::string& what) {
    ok = ok && pass;
    if (!config.quiet || !pass) (pass ? out : err) << (pass ? "PASS " : "FAIL ") << what << "\n";
  };

  const std::vector<Prime> primes{kExampleP1, kExampleP2};
  const auto problems = verify_tuple(params, primes);
  line(problems.empty(), "conditions (1)-(4) for p_1 = " + dec(kExampleP1) + ", p_2 = " + dec(kExampleP2) +
                             (problems.empty() ? "" : ": " + problems.front()));
  if (!problems.empty()) return exit_certificate;
  const AdmissibleTuple tuple = hasse::make_tuple(params, primes);
  line(tuple.ramified == std::vector<Prime>{2, 3, 29}, "U = {" + join(tuple.ramified) + "}");

  const BuildOutcome res = build_certificate(tuple, {1}, {1}, "paper-example");
  const Json& c = res.certificate;
  line(c["membership"]["pass"].get<bool>(), "q = " + dec(kExampleP1) + " is everywhere locally soluble");
  line(c["obstruction"]["verdict"] == "infeasible", "q is outside the image of d^D (gluing system infeasible)");
  line(res.verdict == "order-p-in-sha", "verdict " + res.verdict);

  const CurveFamily curve = CurveFamily::make(params.p, params.u, params.v, primes);
  const std::string rendered = emit_models(curve, twist_class(tuple, {1}, {1})).render();
  const std::string diff = diff_equations(golden, rendered);
  line(diff.empty(), "equations match " + golden_path);
  if (!diff.empty()) err << diff;

  const VerifyResult vr = verify_certificate(c);
  line(vr.ok(), "certificate re-verifies" + (vr.ok() ? std::string() : ": " + vr.failures.front()));

  if (!config.out_path.empty()) {
    if (!write_file(config.out_path, canonical_dump(c))) {
      err << "error: cannot write " << config.out_path << "\n";
      return exit_io;
    }
  }
  return ok ? exit_ok : exit_certificate;
}

}  // namespace hasse
