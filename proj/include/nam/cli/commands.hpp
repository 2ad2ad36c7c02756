#ifndef NAM_CLI_COMMANDS_HPP
#define NAM_CLI_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "nam/cavi.hpp"
#include "nam/prior_analytics.hpp"
#include "nam/simulation.hpp"

namespace nam::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParseError = 2,      // command line or input file
  kExitInvalidConfig = 3,   // values outside their domain
  kExitNumericalFault = 4,  // non-finite ELBO, failed factorization
  kExitIoError = 5,         // output could not be written
};

struct SimulateOptions {
  SimScenario scenario;
  std::string out_dir = ".";
};

// Writes x.csv, y.csv, truth_s.csv and truth_m.csv into out_dir.
void cmd_simulate(const SimulateOptions& options);

struct FitOptions {
  std::string x_path = "x.csv";
  std::string y_path = "y.csv";
  std::string out_dir = ".";
  Index K = 30;
  Index L = 30;
  Variant variant = Variant::NAM;
  double lambda_x = 0.05;
  double lambda_y = 0.05;
  std::optional<double> nu_x;  // default q + 5
  std::optional<double> nu_y;  // default p + 5
  double a_alpha = 1.0;
  double b_alpha = 1.0;
  double a_beta = 1.0;
  double b_beta = 1.0;
  CaviConfig cavi;  // seed is ignored; restarts derive theirs from master_seed
  int restarts = 50;
  int threads = 0;  // 0 = hardware concurrency
  std::uint64_t master_seed = 0;
};

// Runs the restarts and writes s_hat.csv, m_hat.csv, elbo_trace.csv and
// manifest.json into out_dir. Returns the manifest. Throws NumericalFault
// when every restart fails numerically.
nlohmann::json cmd_fit(const FitOptions& options);

struct EvalOptions {
  std::string s_hat = "s_hat.csv";
  std::string m_hat = "m_hat.csv";
  std::string truth_s = "truth_s.csv";
  std::string truth_m = "truth_m.csv";
};

// GC ARI, per-group OC ARI mean and SD, overall OC ARI and cluster counts.
nlohmann::json cmd_eval(const EvalOptions& options);

struct PriorOptions {
  PriorSpec spec;
  std::size_t mc_draws = 0;  // 0 = closed forms only
  std::uint64_t seed = 0;
  int truncation = 1000;
};

nlohmann::json cmd_prior(const PriorOptions& options);

nlohmann::json cmd_bound(const TruncationSpec& spec);

// Parses the command line, runs one subcommand and maps exceptions to exit
// codes. Diagnostics go to stderr, JSON reports to stdout.
int run(int argc, char** argv);

}  // namespace nam::cli

#endif  // NAM_CLI_COMMANDS_HPP
