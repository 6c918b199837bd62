#pragma once

// Command-line configuration shared by every subcommand. A parsed RunConfig
// renders to a canonical argument string that parses back to an equal value.

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace modprime::cli {

struct RunConfig {
  std::string command;

  double x = 1000;
  double y = 10;
  double T = 1e5;
  int k = 2;
  int K = 4;
  std::complex<double> z{0.0, 0.0};
  double alpha = 1.5;
  double lambda_max = 2.0;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  std::uint64_t M = 20;
  std::uint64_t seeds = 20;
  std::uint64_t points = 1000;

  std::vector<double> grid;
  std::vector<double> T_grid;
  std::vector<double> u_grid;
  std::vector<double> h_grid;
  std::vector<std::complex<double>> z_grid;
  std::vector<int> N_grid;
  std::vector<int> V_grid;

  std::string weight = "one";
  std::string mode;
  std::string coef = "extremal";

  int nodes_per_period = 8;
  std::string rule = "midpoint";
  int gauss_points = 8;
  std::uint64_t max_nodes = std::uint64_t{1} << 28;

  std::uint64_t limit = 0;  // 0: the smallest sieve the command needs
  std::string format = "csv";
  std::string output;  // empty: stdout
  unsigned threads = 0;

  bool operator==(const RunConfig&) const = default;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"sieve",      "phi",  "gamma-f", "moments",  "charfun",
                                                 "cumulants",  "truncation", "clt", "ldp", "mv-check",
                                                 "appendix-b", "sigma-star"};
  return names;
}

// Defaults for one subcommand.
RunConfig defaults_for(const std::string& command);

struct ParseOutcome {
  enum class Status { ok, help, usage_error } status = Status::ok;
  RunConfig config;
  std::string message;  // help text or error plus the flag table
};

ParseOutcome parse_run_config(const std::vector<std::string>& args);

// Options of the selected command in a fixed order, values canonically formatted.
// threads and output are left out: they never change the results.
std::vector<std::pair<std::string, std::string>> canonical_params(const RunConfig& cfg);
// "command --opt=value ..." including threads and output when set.
std::vector<std::string> canonical_args(const RunConfig& cfg);
std::string canonical_string(const RunConfig& cfg);

std::complex<double> parse_complex(const std::string& text);
std::string format_complex(std::complex<double> z);

}  // namespace modprime::cli
