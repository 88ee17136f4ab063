#pragma once

#include <cstdint>
#include <string>

namespace kauction {

// Parsed command line; config-file values fill any field not set by an
// explicit flag. Defaults here are the documented defaults.
struct RunConfig {
  std::string dist_spec = "uniform";
  int n = 0;
  int k = 0;
  int grid_size = 101;
  std::string output;      // empty = stdout
  std::string format;      // "csv" or "report"; default set per subcommand
  std::uint64_t seed = 0;
  bool seed_set = false;   // seeds must be explicit; no env fallback
  std::int64_t num_auctions = 100000;
  bool best_response = false;
  double x0 = 0.0;
  bool x0_set = false;
  double dev_min = 0.0;
  double dev_max = 0.0;
  int dev_count = 21;
  bool dev_range_set = false;
  std::string payoff_csv;  // optional side table in best-response mode
  bool assert_equilibrium = false;
  bool pretty = false;     // 6-digit tables instead of 17
};

// Exit codes: 0 ok, 1 check failed, 2 config/parse error, 3 domain error.
int run_cli(int argc, const char* const* argv);

}  // namespace kauction
