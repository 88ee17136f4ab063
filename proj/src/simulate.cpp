#include "kauction/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kauction/equilibrium.hpp"
#include "kauction/format.hpp"

namespace kauction {

namespace {

constexpr std::int64_t kChunk = 1 << 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Sample standard error of the mean; +inf sentinel for a single sample.
double stderr_of(double sum, double sumsq, std::int64_t n) {
  if (n < 2) return kInf;
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1));
  return std::sqrt(var / n);
}

nlohmann::json finite_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed + 0x9E3779B97F4A7C15ULL) ^
             mix64(stream * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL)) {}

std::uint64_t CounterRng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double CounterRng::next_open01() {
  return ((next_u64() >> 12) + 0.5) * 0x1p-52;
}

void SimConfig::validate() const {
  spec.validate();
  if (num_auctions < 1) throw std::invalid_argument("sim config: num_auctions must be >= 1");
  for (std::size_t i = 1; i < deviation_grid.size(); ++i)
    if (!(deviation_grid[i] > deviation_grid[i - 1]))
      throw std::invalid_argument("sim config: deviation grid must be strictly increasing");
}

std::pair<int, double> run_auction(const AuctionSpec& spec, std::span<const double> bids,
                                   CounterRng& rng) {
  // The mechanical auction is defined up to k = n (price = lowest bid);
  // only the equilibrium theory needs n > k.
  if (spec.k < 2 || spec.k > spec.n)
    throw std::invalid_argument("run_auction: requires 2 <= k <= n");
  if (bids.size() != static_cast<std::size_t>(spec.n))
    throw std::invalid_argument("run_auction: expected exactly n bids");

  const double top = *std::max_element(bids.begin(), bids.end());
  int ties = 0;
  for (double b : bids) ties += (b == top);
  int winner = -1;
  if (ties == 1) {
    winner = static_cast<int>(std::max_element(bids.begin(), bids.end()) - bids.begin());
  } else {
    int pick = std::min(ties - 1, static_cast<int>(rng.next_open01() * ties));
    for (std::size_t i = 0; i < bids.size(); ++i) {
      if (bids[i] == top && pick-- == 0) {
        winner = static_cast<int>(i);
        break;
      }
    }
  }

  std::vector<double> sorted(bids.begin(), bids.end());
  std::nth_element(sorted.begin(), sorted.begin() + (spec.k - 1), sorted.end(),
                   std::greater<double>());
  return {winner, sorted[static_cast<std::size_t>(spec.k - 1)]};
}

std::pair<double, double> estimate_revenue(const SimConfig& cfg) {
  cfg.validate();
  const int n = cfg.spec.n;
  const int k = cfg.spec.k;

  double sum = 0.0;
  double sumsq = 0.0;
  std::vector<double> us(static_cast<std::size_t>(n));
  for (std::int64_t chunk_start = 0; chunk_start < cfg.num_auctions; chunk_start += kChunk) {
    const std::int64_t chunk_end = std::min(cfg.num_auctions, chunk_start + kChunk);
    double part = 0.0;
    double partsq = 0.0;
    for (std::int64_t i = chunk_start; i < chunk_end; ++i) {
      CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
      for (double& u : us) u = rng.next_open01();
      // kth-highest quantile; beta increasing makes this the kth-highest bid.
      std::nth_element(us.begin(), us.begin() + (k - 1), us.end(), std::greater<double>());
      const double revenue = bid_generic(cfg.spec, cfg.dist, us[static_cast<std::size_t>(k - 1)]);
      part += revenue;
      partsq += revenue * revenue;
    }
    sum += part;
    sumsq += partsq;
  }
  return {sum / cfg.num_auctions, stderr_of(sum, sumsq, cfg.num_auctions)};
}

SimulationReport best_response_scan(const SimConfig& cfg) {
  cfg.validate();
  for (double b : cfg.deviation_grid)
    if (b < 0.0) throw std::domain_error("best_response_scan: deviation bids must be >= 0");
  if (cfg.deviation_grid.empty())
    throw std::invalid_argument("best_response_scan: deviation grid must be nonempty");

  const int n = cfg.spec.n;
  const int k = cfg.spec.k;
  const double u0 = cfg.dist.cdf(cfg.x0);
  if (!(u0 > 0.0 && u0 < 1.0))
    throw std::domain_error("best_response_scan: x0 must lie strictly inside the support");
  const double eq_bid = bid_generic(cfg.spec, cfg.dist, u0);

  // Candidates: the grid, then the equilibrium bid itself.
  std::vector<double> candidates = cfg.deviation_grid;
  candidates.push_back(eq_bid);
  const std::size_t m = candidates.size();
  const std::size_t eq_idx = m - 1;

  std::vector<double> sum(m, 0.0), sumsq(m, 0.0);
  std::vector<double> dsum(m, 0.0), dsumsq(m, 0.0);
  std::vector<double> part_sum(m), part_sumsq(m), part_dsum(m), part_dsumsq(m);
  std::vector<double> opp(static_cast<std::size_t>(n - 1));
  std::vector<double> payoff(m);

  for (std::int64_t chunk_start = 0; chunk_start < cfg.num_auctions; chunk_start += kChunk) {
    const std::int64_t chunk_end = std::min(cfg.num_auctions, chunk_start + kChunk);
    std::fill(part_sum.begin(), part_sum.end(), 0.0);
    std::fill(part_sumsq.begin(), part_sumsq.end(), 0.0);
    std::fill(part_dsum.begin(), part_dsum.end(), 0.0);
    std::fill(part_dsumsq.begin(), part_dsumsq.end(), 0.0);

    for (std::int64_t i = chunk_start; i < chunk_end; ++i) {
      // Draw order per auction: n-1 opponent quantiles, then a tie-break.
      CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
      for (double& u : opp) u = rng.next_open01();
      const double tiebreak = rng.next_open01();

      for (double& b : opp) b = bid_generic(cfg.spec, cfg.dist, b);
      std::sort(opp.begin(), opp.end(), std::greater<double>());
      const double opp_max = opp.front();
      // If the deviator wins, the kth-highest of all n bids is the
      // (k-1)th-highest opponent bid.
      const double price = opp[static_cast<std::size_t>(k - 2)];

      for (std::size_t j = 0; j < m; ++j) {
        const double b = candidates[j];
        const bool win = b > opp_max || (b == opp_max && tiebreak < 0.5);
        payoff[j] = win ? (cfg.x0 - price) : 0.0;
      }
      for (std::size_t j = 0; j < m; ++j) {
        part_sum[j] += payoff[j];
        part_sumsq[j] += payoff[j] * payoff[j];
        const double d = payoff[j] - payoff[eq_idx];
        part_dsum[j] += d;
        part_dsumsq[j] += d * d;
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      sum[j] += part_sum[j];
      sumsq[j] += part_sumsq[j];
      dsum[j] += part_dsum[j];
      dsumsq[j] += part_dsumsq[j];
    }
  }

  SimulationReport report;
  report.spec = cfg.spec;
  report.dist_id = cfg.dist.id();
  report.seed = cfg.seed;
  report.num_auctions = cfg.num_auctions;
  report.x0 = cfg.x0;
  report.equilibrium_bid = eq_bid;
  report.equilibrium_payoff_mean = sum[eq_idx] / cfg.num_auctions;
  report.equilibrium_payoff_stderr = stderr_of(sum[eq_idx], sumsq[eq_idx], cfg.num_auctions);

  report.payoffs.reserve(cfg.deviation_grid.size());
  double best = -kInf;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    PayoffRow row;
    row.bid = candidates[j];
    row.n_samples = cfg.num_auctions;
    row.mean_payoff = sum[j] / cfg.num_auctions;
    row.stderr_payoff = stderr_of(sum[j], sumsq[j], cfg.num_auctions);
    row.diff_mean = dsum[j] / cfg.num_auctions;
    row.diff_stderr = stderr_of(dsum[j], dsumsq[j], cfg.num_auctions);
    if (row.mean_payoff > best) {
      best = row.mean_payoff;
      report.argmax_bid = row.bid;
    }
    // Dominance within noise: no deviation may beat the equilibrium by
    // more than 3 paired standard errors.
    const double margin = std::isinf(row.diff_stderr) ? kInf : 3.0 * row.diff_stderr;
    if (row.diff_mean > margin) report.equilibrium_ok = false;
    report.payoffs.push_back(row);
  }
  return report;
}

nlohmann::json report_to_json(const SimulationReport& report) {
  nlohmann::json j;
  j["spec"] = {{"n", report.spec.n}, {"k", report.spec.k}};
  j["distribution"] = report.dist_id;
  j["seed"] = report.seed;
  j["num_auctions"] = report.num_auctions;
  if (report.revenue_mean) {
    j["revenue_mean"] = *report.revenue_mean;
    j["revenue_stderr"] = finite_or_inf(*report.revenue_stderr);
  }
  if (!report.payoffs.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.payoffs) {
      rows.push_back({{"bid", row.bid},
                      {"mean_payoff", row.mean_payoff},
                      {"stderr", finite_or_inf(row.stderr_payoff)},
                      {"n_samples", row.n_samples},
                      {"diff_mean", row.diff_mean},
                      {"diff_stderr", finite_or_inf(row.diff_stderr)}});
    }
    j["payoffs"] = std::move(rows);
    j["argmax_bid"] = report.argmax_bid;
    j["x0"] = report.x0;
    j["equilibrium_bid"] = report.equilibrium_bid;
    j["equilibrium_payoff_mean"] = report.equilibrium_payoff_mean;
    j["equilibrium_payoff_stderr"] = finite_or_inf(report.equilibrium_payoff_stderr);
    j["equilibrium_ok"] = report.equilibrium_ok;
  }
  return j;
}

std::string payoff_table_csv(const SimulationReport& report, int digits) {
  std::string out = "bid,mean_payoff,stderr,n_samples\n";
  for (const auto& row : report.payoffs) {
    out += format_double(row.bid, digits);
    out += ',';
    out += format_double(row.mean_payoff, digits);
    out += ',';
    out += format_double(row.stderr_payoff, digits);
    out += ',';
    out += std::to_string(row.n_samples);
    out += '\n';
  }
  return out;
}

}  // namespace kauction
