#include "kauction/cli.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kauction/distribution.hpp"
#include "kauction/equilibrium.hpp"
#include "kauction/format.hpp"
#include "kauction/simulate.hpp"
#include "kauction/verify.hpp"

namespace kauction {

namespace {

struct SubOpts {
  CLI::App* cmd = nullptr;
  CLI::Option* dist = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* k = nullptr;
  CLI::Option* grid = nullptr;
  CLI::Option* output = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* pretty = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* auctions = nullptr;
  CLI::Option* best_response = nullptr;
  CLI::Option* x0 = nullptr;
  CLI::Option* dev_min = nullptr;
  CLI::Option* dev_max = nullptr;
  CLI::Option* dev_count = nullptr;
  CLI::Option* payoff_csv = nullptr;
  CLI::Option* assert_eq = nullptr;
};

bool flag_unset(const CLI::Option* opt) { return opt == nullptr || opt->count() == 0; }

// Config-file values fill only fields the command line left untouched.
void merge_config(const std::string& path, RunConfig& cfg, const SubOpts& o, bool& have_dev_min,
                  bool& have_dev_max) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file " + path + ": " + e.what());
  }
  try {
    if (j.contains("dist") && flag_unset(o.dist)) cfg.dist_spec = j["dist"].get<std::string>();
    if (j.contains("n") && flag_unset(o.n)) cfg.n = j["n"].get<int>();
    if (j.contains("k") && flag_unset(o.k)) cfg.k = j["k"].get<int>();
    if (j.contains("grid") && flag_unset(o.grid)) cfg.grid_size = j["grid"].get<int>();
    if (j.contains("output") && flag_unset(o.output)) cfg.output = j["output"].get<std::string>();
    if (j.contains("format") && flag_unset(o.format)) cfg.format = j["format"].get<std::string>();
    if (j.contains("pretty") && flag_unset(o.pretty)) cfg.pretty = j["pretty"].get<bool>();
    if (j.contains("seed") && flag_unset(o.seed)) {
      cfg.seed = j["seed"].get<std::uint64_t>();
      cfg.seed_set = true;
    }
    if (j.contains("auctions") && flag_unset(o.auctions))
      cfg.num_auctions = j["auctions"].get<std::int64_t>();
    if (j.contains("best_response") && flag_unset(o.best_response))
      cfg.best_response = j["best_response"].get<bool>();
    if (j.contains("x0") && flag_unset(o.x0)) {
      cfg.x0 = j["x0"].get<double>();
      cfg.x0_set = true;
    }
    if (j.contains("dev_min") && flag_unset(o.dev_min)) {
      cfg.dev_min = j["dev_min"].get<double>();
      have_dev_min = true;
    }
    if (j.contains("dev_max") && flag_unset(o.dev_max)) {
      cfg.dev_max = j["dev_max"].get<double>();
      have_dev_max = true;
    }
    if (j.contains("dev_count") && flag_unset(o.dev_count))
      cfg.dev_count = j["dev_count"].get<int>();
    if (j.contains("payoff_csv") && flag_unset(o.payoff_csv))
      cfg.payoff_csv = j["payoff_csv"].get<std::string>();
    if (j.contains("assert_equilibrium") && flag_unset(o.assert_eq))
      cfg.assert_equilibrium = j["assert_equilibrium"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file " + path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("deviation grid needs at least 1 point");
  if (count == 1) return {lo};
  if (!(hi > lo)) throw std::invalid_argument("deviation range must satisfy min < max");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return out;
}

int cmd_bid(const RunConfig& cfg) {
  if (!cfg.format.empty() && cfg.format != "csv")
    throw std::invalid_argument("bid supports --format csv only");
  AuctionSpec spec{cfg.n, cfg.k};
  spec.validate();
  const Distribution d = Distribution::parse(cfg.dist_spec);
  const auto grid = default_grid(static_cast<std::size_t>(std::max(0, cfg.grid_size)));
  const BidCurve curve = bid_curve(spec, d, grid);
  const int digits = cfg.pretty ? 6 : 17;

  std::string out = "u,x,beta,beta_asymptotic\n";
  for (const auto& p : curve.points) {
    // k=2 is truthful; the large-n column degenerates to x itself.
    const double asym = (spec.k == 2) ? p.x : bid_asymptotic(spec, d, p.u);
    out += format_double(p.u, digits);
    out += ',';
    out += format_double(p.x, digits);
    out += ',';
    out += format_double(p.beta, digits);
    out += ',';
    out += format_double(asym, digits);
    out += '\n';
  }
  write_output(cfg.output, out);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  if (!cfg.format.empty() && cfg.format != "report")
    throw std::invalid_argument("verify supports --format report only");
  AuctionSpec spec{cfg.n, cfg.k};
  spec.validate();
  const Distribution d = Distribution::parse(cfg.dist_spec);
  const auto grid = default_grid(static_cast<std::size_t>(std::max(0, cfg.grid_size)));
  const VerificationReport report = full_report(spec, d, grid);
  write_output(cfg.output, report_to_json(report).dump(2) + "\n");
  return report.passed() ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg) {
  if (!cfg.format.empty() && cfg.format != "report")
    throw std::invalid_argument("simulate supports --format report only");
  if (!cfg.seed_set)
    throw std::invalid_argument("simulate requires an explicit --seed (no environment fallback)");
  AuctionSpec spec{cfg.n, cfg.k};
  spec.validate();
  const Distribution d = Distribution::parse(cfg.dist_spec);

  SimConfig sim;
  sim.spec = spec;
  sim.dist = d;
  sim.num_auctions = cfg.num_auctions;
  sim.seed = cfg.seed;

  SimulationReport report;
  report.spec = spec;
  report.dist_id = d.id();
  report.seed = cfg.seed;
  report.num_auctions = cfg.num_auctions;

  if (cfg.best_response) {
    if (!cfg.x0_set) throw std::invalid_argument("--best-response requires --x0");
    sim.x0 = cfg.x0;
    if (cfg.dev_range_set) {
      sim.deviation_grid = linspace(cfg.dev_min, cfg.dev_max, cfg.dev_count);
    } else {
      const double u0 = d.cdf(cfg.x0);
      if (!(u0 > 0.0 && u0 < 1.0))
        throw std::domain_error("x0 must lie strictly inside the support");
      const double eq = bid_generic(spec, d, u0);
      const double lo = (eq > 0.0) ? 0.5 * eq : 0.0;
      const double hi = (eq > 0.0) ? 1.5 * eq : 1.0;
      sim.deviation_grid = linspace(lo, hi, cfg.dev_count);
    }
    report = best_response_scan(sim);
  }

  const auto [mean, se] = estimate_revenue(sim);
  report.revenue_mean = mean;
  report.revenue_stderr = se;

  write_output(cfg.output, report_to_json(report).dump(2) + "\n");
  if (!cfg.payoff_csv.empty() && cfg.best_response)
    write_output(cfg.payoff_csv, payoff_table_csv(report, cfg.pretty ? 6 : 17));

  if (cfg.assert_equilibrium && cfg.best_response && !report.equilibrium_ok) return 1;
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"kth-price sealed-bid auction equilibrium toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  SubOpts bid_o, ver_o, sim_o;

  const auto add_common = [&](CLI::App* cmd, SubOpts& o) {
    o.cmd = cmd;
    o.dist = cmd->add_option(
        "--dist", cfg.dist_spec,
        "distribution: uniform | power:alpha=A | exp:lambda=L | fattail:c=C | custom:file=PATH");
    o.n = cmd->add_option("--n", cfg.n, "number of bidders (n > k)");
    o.k = cmd->add_option("--k", cfg.k, "price rank (k >= 2)");
    o.output = cmd->add_option("--output", cfg.output, "output path (default: stdout)");
    o.format = cmd->add_option("--format", cfg.format, "csv | report");
    cmd->add_option("--config", config_path, "JSON config file; explicit flags override it");
    o.pretty = cmd->add_flag("--pretty", cfg.pretty, "6 significant digits instead of 17");
  };

  CLI::App* bid = app.add_subcommand("bid", "tabulate the equilibrium bid curve as CSV");
  add_common(bid, bid_o);
  bid_o.grid = bid->add_option("--grid", cfg.grid_size, "quantile grid size (default 101)");

  CLI::App* ver = app.add_subcommand("verify", "run verification checks, emit a report");
  add_common(ver, ver_o);
  ver_o.grid = ver->add_option("--grid", cfg.grid_size, "quantile grid size (default 101)");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo revenue and best-response checks");
  add_common(sim, sim_o);
  sim_o.seed = sim->add_option("--seed", cfg.seed, "RNG seed (required, never read from env)");
  sim_o.auctions = sim->add_option("--auctions", cfg.num_auctions, "auction count (default 100000)");
  sim_o.best_response =
      sim->add_flag("--best-response", cfg.best_response, "scan deviation payoffs at --x0");
  sim_o.x0 = sim->add_option("--x0", cfg.x0, "deviating bidder's valuation");
  sim_o.dev_min = sim->add_option("--dev-min", cfg.dev_min, "lowest deviation bid");
  sim_o.dev_max = sim->add_option("--dev-max", cfg.dev_max, "highest deviation bid");
  sim_o.dev_count = sim->add_option("--dev-count", cfg.dev_count, "deviation grid size (default 21)");
  sim_o.payoff_csv = sim->add_option("--payoff-csv", cfg.payoff_csv, "write the payoff table CSV");
  sim_o.assert_eq = sim->add_flag("--assert-equilibrium", cfg.assert_equilibrium,
                                  "exit 1 if any deviation beats the equilibrium by > 3 s.e.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const SubOpts& active = bid->parsed() ? bid_o : ver->parsed() ? ver_o : sim_o;
  cfg.seed_set = !flag_unset(sim_o.seed);
  cfg.x0_set = !flag_unset(sim_o.x0);
  bool have_dev_min = !flag_unset(sim_o.dev_min);
  bool have_dev_max = !flag_unset(sim_o.dev_max);

  try {
    if (!config_path.empty()) merge_config(config_path, cfg, active, have_dev_min, have_dev_max);
    if (have_dev_min != have_dev_max)
      throw std::invalid_argument("deviation range needs both dev_min and dev_max");
    cfg.dev_range_set = have_dev_min && have_dev_max;

    if (bid->parsed()) return cmd_bid(cfg);
    if (ver->parsed()) return cmd_verify(cfg);
    return cmd_simulate(cfg);
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::range_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace kauction
