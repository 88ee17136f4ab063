#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kauction/auction.hpp"
#include "kauction/distribution.hpp"

#include "json.hpp"

namespace kauction {

// Counter-based RNG: one independent stream per (seed, stream) pair, so
// auction i always sees the same draws regardless of scheduling or chunk
// layout. The generator is a splitmix64 walk from a mixed start state.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform draw on the open interval (0,1): never 0, never 1.
  double next_open01();

private:
  std::uint64_t state_;
};

struct SimConfig {
  AuctionSpec spec;
  Distribution dist = Distribution::uniform();
  std::int64_t num_auctions = 0;
  std::uint64_t seed = 0;
  std::vector<double> deviation_grid;  // bids, strictly increasing
  double x0 = 0.0;                     // deviating bidder's fixed valuation

  void validate() const;
};

struct PayoffRow {
  double bid = 0.0;
  double mean_payoff = 0.0;
  double stderr_payoff = 0.0;
  std::int64_t n_samples = 0;
  // Paired statistics of payoff(bid) - payoff(equilibrium bid) under
  // common random numbers; the basis of the dominance test.
  double diff_mean = 0.0;
  double diff_stderr = 0.0;
};

struct SimulationReport {
  AuctionSpec spec;
  std::string dist_id;
  std::uint64_t seed = 0;
  std::int64_t num_auctions = 0;
  std::optional<double> revenue_mean;
  std::optional<double> revenue_stderr;
  std::vector<PayoffRow> payoffs;
  double argmax_bid = 0.0;
  double x0 = 0.0;
  double equilibrium_bid = 0.0;
  double equilibrium_payoff_mean = 0.0;
  double equilibrium_payoff_stderr = 0.0;
  // True when no grid deviation beats the equilibrium bid by more than
  // 3 paired standard errors.
  bool equilibrium_ok = true;
};

// Winner (ties uniform at random) and the kth-highest bid as price.
std::pair<int, double> run_auction(const AuctionSpec& spec, std::span<const double> bids,
                                   CounterRng& rng);

// Mean kth-highest equilibrium bid over cfg.num_auctions auctions.
// Exploits monotonicity of beta: the kth-highest bid is beta at the
// kth-highest quantile, one bid evaluation per auction.
std::pair<double, double> estimate_revenue(const SimConfig& cfg);

// Payoff surface of a deviating bidder with valuation x0 trying each grid
// bid, opponents bidding the equilibrium. Common random numbers across
// the grid; the equilibrium bid itself is evaluated alongside.
SimulationReport best_response_scan(const SimConfig& cfg);

// Documented keys mirror VerificationReport's schema family. Infinite
// standard errors serialize as the string "inf".
nlohmann::json report_to_json(const SimulationReport& report);

// CSV with header bid,mean_payoff,stderr,n_samples; 17 significant
// digits, locale-independent.
std::string payoff_table_csv(const SimulationReport& report, int digits = 17);

}  // namespace kauction
