#pragma once

// Certificate files and the command implementations behind the CLI.
//
// A certificate is canonical JSON: object keys sorted, two-space indent,
// every integer rendered as a decimal string. Everything except the
// "metadata" object is the payload; two runs on the same inputs produce
// byte-identical payloads.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hasse/local.hpp"
#include "hasse/obstruction.hpp"
#include "hasse/search.hpp"

namespace hasse {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "hasse-certificate/1";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_parameter = 1, exit_exhausted = 2, exit_certificate = 3, exit_io = 4 };

struct RunConfig {
  SearchParams params;
  /// 1-based tuple indices I and the exponents a_i, one per index.
  std::vector<std::uint32_t> subset{1};
  std::vector<std::uint32_t> exponents;
  /// Known tuple primes; when empty, build runs the search.
  std::vector<Prime> primes;
  std::string tuple_path;
  std::string out_path;
  std::string golden_path;
  bool quiet = false;
};

/// Checks SearchParams, subset ranges and exponent ranges. Throws ParameterError.
void validate(const RunConfig& config);

/// q = prod_{i in I} p_i^{a_i}; exponents default to 1.
ResidueClass twist_class(const AdmissibleTuple& tuple, const std::vector<std::uint32_t>& subset,
                         const std::vector<std::uint32_t>& exponents);

// --- serialization ----------------------------------------------------------

Json to_json(const SearchParams& params);
SearchParams params_from_json(const Json& j);
Json to_json(const AdmissibleTuple& tuple);
Json to_json(const ResidueClass& q);
Json to_json(const TorsorEquations& eqs);
Json to_json(const MembershipCertificate& cert);
Json to_json(const ObstructionCertificate& cert);
Json to_json(const ShaBound& bound);
Json assumed_lemmas(const AdmissibleTuple& tuple);

/// The canonical text of a certificate (trailing newline included).
std::string canonical_dump(const Json& cert);
/// The certificate without its metadata.
Json payload(const Json& cert);
/// JSON pointer of the first difference between two documents, if any.
std::optional<std::string> first_difference(const Json& a, const Json& b);

// --- certificate construction -------------------------------------------------

struct BuildOutcome {
  Json certificate;
  std::string verdict;
  int exit_code = exit_ok;
  std::string failure;  // first failing place/row, when exit_code != 0
};

Json search_certificate(const AdmissibleTuple& tuple, const SearchStats* stats = nullptr);
BuildOutcome build_certificate(const AdmissibleTuple& tuple, const std::vector<std::uint32_t>& subset,
                               const std::vector<std::uint32_t>& exponents, const std::string& kind = "build");

// --- verification -----------------------------------------------------------

struct VerifyResult {
  int exit_code = exit_ok;
  std::vector<std::string> failures;  // each names the JSON path it concerns

  bool ok() const { return exit_code == exit_ok; }
};

/// Re-checks every symbol, witness and linear-algebra verdict, then regenerates
/// the payload from its inputs (params, primes, subset, exponents) and compares.
VerifyResult verify_certificate(const Json& cert);

// --- commands ---------------------------------------------------------------

/// Inputs of the p = 29 worked example.
inline constexpr std::uint32_t kExampleP = 29;
inline constexpr std::int64_t kExampleU = 1;
inline constexpr std::int64_t kExampleV = -1;
inline constexpr Prime kExampleP1 = 386029093;
inline constexpr Prime kExampleP2 = 545622299;

/// Golden rendering compiled in from the source tree.
std::string default_golden_path();

/// Lines of `text` that are not '#' comments, compared against `want`; returns
/// a unified-style diff or empty when equal.
std::string diff_equations(const std::string& golden_text, const std::string& rendered);

int cmd_search(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_build(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_paper_example(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace hasse
