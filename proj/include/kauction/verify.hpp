#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kauction/auction.hpp"
#include "kauction/distribution.hpp"

#include "json.hpp"

namespace kauction {

struct MonotoneResult {
  bool monotone = false;
  double min_slope = 0.0;
};

// Tolerances a report was judged against.
struct VerifyTolerances {
  double residual = 1e-8;
  double psi = 1e-4;  // 1e-6 when k == 3
  double lemma1 = 1e-3;
};

struct VerificationReport {
  AuctionSpec spec;
  std::string dist_id;
  std::vector<double> grid;
  // Per-grid-point residual of the characterization equation. Empty with
  // residuals_skipped=true for k=2, where the equation does not apply.
  std::vector<double> residuals;
  bool residuals_skipped = false;
  MonotoneResult monotone;
  // Max deviation between the quadrature+finite-difference route and the
  // jet route to gamma^(k-2). Skipped outside 3 <= k <= 5, where finite
  // differences stop resolving the target.
  double psi_max_dev = 0.0;
  bool psi_skipped = false;
  double lemma1_max_dev = 0.0;
  VerifyTolerances tolerances;

  double max_abs_residual() const;
  bool passed() const;
};

// Residual of the equilibrium characterization at quantile u, for a
// candidate bid function given over quantiles:
//   R(u) = int_0^u [Q(u) - beta(z)] z^(n-k) (u-z)^(k-3) dz
// normalized by S(u) = Q(u) u^(n-2) B(n-k+1, k-2). Zero iff beta is the
// equilibrium; a +1% scaling of beta moves it by about 0.01.
double characterization_residual(const AuctionSpec& spec, const Distribution& d,
                                 const std::function<double(double)>& beta, double u);

// Min slope (in valuation x) over adjacent curve points.
MonotoneResult check_monotone(const BidCurve& curve);

// Independent route to gamma^(k-2)(u): integrate psi_0(v) = int_0^v Q z^(n-2) dz
// by quadrature, differentiate k-1 times by central finite differences
// (h = 1e-3, one Richardson step), and compare against the jet value.
// Returns |fd - jet| / max(1, |jet|).
double psi_crosscheck(const AuctionSpec& spec, const Distribution& d, double u);

// Checks H_r^(r+1)(u) = r! qhat(u) u^m for H_r(u) = int_0^u qhat(z) (u-z)^r z^m dz,
// with the derivative taken by finite differences over quadrature values.
// Returns |fd - exact| / max(1, |exact|).
double lemma1_check(double m, int r, const std::function<double(double)>& qhat, double u);

// Runs every check over the grid and aggregates maxima. Deterministic.
VerificationReport full_report(const AuctionSpec& spec, const Distribution& d,
                               std::span<const double> grid);
VerificationReport full_report(const AuctionSpec& spec, const Distribution& d);

// Documented keys: spec, distribution, grid, residuals, monotone,
// min_slope, psi_max_dev, lemma1_max_dev, tolerances. Skipped sections
// carry the string "skipped" in place of numbers.
nlohmann::json report_to_json(const VerificationReport& report);

}  // namespace kauction
