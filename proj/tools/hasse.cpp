#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hasse/certificate.hpp"
#include "hasse/errors.hpp"

namespace {

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item[0] == '-') throw hasse::ParameterError(std::string("bad ") + what + ": " + item);
    out.push_back(static_cast<T>(v));
  }
  return out;
}

void add_params(CLI::App* cmd, hasse::RunConfig& cfg, std::string& strategy) {
  cmd->add_option("--p", cfg.params.p, "prime exponent p > 3");
  cmd->add_option("--u", cfg.params.u, "curve parameter u, 3 does not divide u");
  cmd->add_option("--v", cfg.params.v, "curve parameter v, 3 does not divide v");
  cmd->add_option("--t", cfg.params.t, "number of tuple primes");
  cmd->add_option("--start", cfg.params.start, "first candidate");
  cmd->add_option("--limit", cfg.params.limit, "last candidate");
  cmd->add_option("--strategy", strategy, "minimal-largest or greedy");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified Hasse principle violations from superelliptic descent"};
  app.require_subcommand(1);

  hasse::RunConfig cfg;
  std::string strategy = "minimal-largest";
  std::string subset = "1";
  std::string exponents;
  std::string primes;
  std::string path;

  auto* search = app.add_subcommand("search", "find an admissible prime tuple");
  add_params(search, cfg, strategy);
  search->add_option("--out", cfg.out_path, "certificate file (stdout if omitted)");
  search->add_flag("--quiet", cfg.quiet);

  auto* build = app.add_subcommand("build", "emit torsor equations and certificates for q");
  add_params(build, cfg, strategy);
  build->add_option("--subset", subset, "comma-separated 1-based tuple indices I (empty for q = 1)");
  build->add_option("--exponents", exponents, "comma-separated exponents a_i in [1, p-1]");
  build->add_option("--primes", primes, "comma-separated tuple primes (skips the search)");
  build->add_option("--tuple", cfg.tuple_path, "search certificate supplying the tuple");
  build->add_option("--out", cfg.out_path, "certificate file (stdout if omitted)");
  build->add_flag("--quiet", cfg.quiet);

  auto* verify = app.add_subcommand("verify", "re-check a certificate file");
  verify->add_option("path", path, "certificate")->required();
  verify->add_flag("--quiet", cfg.quiet);

  auto* example = app.add_subcommand("paper-example", "reproduce the p = 29 example");
  example->add_option("--golden", cfg.golden_path, "golden equation rendering");
  example->add_option("--out", cfg.out_path, "certificate file");
  example->add_flag("--quiet", cfg.quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? hasse::exit_ok : hasse::exit_parameter;
  }

  try {
    cfg.params.strategy = hasse::parse_strategy(strategy);
    cfg.subset = parse_list<std::uint32_t>(subset, "subset index");
    cfg.exponents = parse_list<std::uint32_t>(exponents, "exponent");
    cfg.primes = parse_list<hasse::Prime>(primes, "prime");
  } catch (const hasse::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return hasse::exit_parameter;
  }

  if (*search) return hasse::cmd_search(cfg, std::cout, std::cerr);
  if (*build) return hasse::cmd_build(cfg, std::cout, std::cerr);
  if (*verify) return hasse::cmd_verify(path, std::cout, std::cerr);
  return hasse::cmd_paper_example(cfg, std::cout, std::cerr);
}
