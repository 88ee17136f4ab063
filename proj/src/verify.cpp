#include "kauction/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kauction/equilibrium.hpp"
#include "kauction/quadrature.hpp"

namespace kauction {

namespace {

constexpr double kFdStep = 1e-3;

// B(n-k+1, k-2) = 1 / ((k-2) C(n-2, k-2)), evaluated multiplicatively.
double beta_normalizer(int n, int k) {
  double binom = 1.0;
  for (int j = 1; j <= k - 2; ++j) binom *= static_cast<double>(n - k + j) / j;
  return 1.0 / ((k - 2) * binom);
}

void require_stencil_inside(double u, int derivative_order) {
  const double halfwidth = richardson_stencil_halfwidth(derivative_order) * kFdStep;
  if (u - halfwidth <= 0.0 || u + halfwidth >= 1.0)
    throw std::domain_error("finite-difference stencil exits (0,1) at u=" + std::to_string(u));
}

}  // namespace

double characterization_residual(const AuctionSpec& spec, const Distribution& d,
                                 const std::function<double(double)>& beta, double u) {
  spec.validate();
  if (spec.k < 3)
    throw std::invalid_argument("characterization_residual: requires k >= 3 (k=2 is truthful)");
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("characterization_residual: u must lie in (0,1)");
  if (u < 1e-6)
    throw std::domain_error("characterization_residual: quadrature degenerates for u < 1e-6");

  const int n = spec.n;
  const int k = spec.k;
  const double q_u = d.quantile(u);
  const auto integrand = [&](double z) {
    const double kernel = (k == 3) ? 1.0 : std::pow(u - z, k - 3);
    return (q_u - beta(z)) * std::pow(z, n - k) * kernel;
  };

  // Dyadic panels toward both endpoints: beta(z) carries a branch point
  // at z=0 for power laws and one just past z=u (at z=1) for the
  // unbounded families; a single panel loses ~6 digits there.
  const double r = integrate_gl64_dyadic(integrand, 0.0, u);

  const double s = q_u * std::pow(u, n - 2) * beta_normalizer(n, k);
  return r / s;
}

MonotoneResult check_monotone(const BidCurve& curve) {
  if (curve.points.size() < 2)
    throw std::invalid_argument("check_monotone: curve needs at least 2 points");
  MonotoneResult result;
  result.min_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& lo = curve.points[i - 1];
    const auto& hi = curve.points[i];
    const double slope = (hi.beta - lo.beta) / (hi.x - lo.x);
    result.min_slope = std::min(result.min_slope, slope);
  }
  result.monotone = result.min_slope > 0.0;
  return result;
}

double psi_crosscheck(const AuctionSpec& spec, const Distribution& d, double u) {
  spec.validate();
  if (spec.k < 3) throw std::invalid_argument("psi_crosscheck: requires k >= 3");
  if (!(u > 0.05 && u < 0.95))
    throw std::domain_error("psi_crosscheck: u must lie in (0.05, 0.95)");

  const int n = spec.n;
  const int k = spec.k;
  // gamma = psi_0', so gamma^(k-2) takes k-1 derivatives of psi_0.
  const int order = k - 1;
  require_stencil_inside(u, order);

  const auto psi0 = [&](double v) {
    return integrate_gl64([&](double z) { return d.quantile(z) * std::pow(z, n - 2); }, 0.0, v);
  };
  const double fd = central_derivative_richardson(psi0, u, order, kFdStep);

  const Jet gamma = gamma_jet(d, u, n, static_cast<std::size_t>(k - 2));
  const double jet = gamma.derivative(static_cast<std::size_t>(k - 2));
  return std::abs(fd - jet) / std::max(1.0, std::abs(jet));
}

double lemma1_check(double m, int r, const std::function<double(double)>& qhat, double u) {
  if (!(m > 0.0)) throw std::invalid_argument("lemma1_check: m must be positive");
  if (r < 0 || r > 3) throw std::invalid_argument("lemma1_check: r must lie in 0..3");
  if (!(u > 0.1 && u < 0.9)) throw std::domain_error("lemma1_check: u must lie in (0.1, 0.9)");
  require_stencil_inside(u, r + 1);

  const auto h_r = [&](double v) {
    return integrate_gl64(
        [&](double z) {
          const double kernel = (r == 0) ? 1.0 : std::pow(v - z, r);
          return qhat(z) * kernel * std::pow(z, m);
        },
        0.0, v);
  };
  const double fd = central_derivative_richardson(h_r, u, r + 1, kFdStep);

  double r_factorial = 1.0;
  for (int j = 2; j <= r; ++j) r_factorial *= j;
  const double exact = r_factorial * qhat(u) * std::pow(u, m);
  return std::abs(fd - exact) / std::max(1.0, std::abs(exact));
}

double VerificationReport::max_abs_residual() const {
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, std::abs(r));
  return worst;
}

bool VerificationReport::passed() const {
  if (!monotone.monotone) return false;
  if (!residuals_skipped && max_abs_residual() > tolerances.residual) return false;
  if (!psi_skipped && psi_max_dev > tolerances.psi) return false;
  return lemma1_max_dev <= tolerances.lemma1;
}

VerificationReport full_report(const AuctionSpec& spec, const Distribution& d,
                               std::span<const double> grid) {
  spec.validate();
  VerificationReport report;
  report.spec = spec;
  report.dist_id = d.id();
  report.grid.assign(grid.begin(), grid.end());
  report.tolerances.psi = (spec.k == 3) ? 1e-6 : 1e-4;

  const auto beta = [&](double z) { return bid_generic(spec, d, z); };

  if (spec.k == 2) {
    report.residuals_skipped = true;
  } else {
    report.residuals.reserve(grid.size());
    for (double u : grid) report.residuals.push_back(characterization_residual(spec, d, beta, u));
  }

  report.monotone = check_monotone(bid_curve(spec, d, grid));

  if (spec.k >= 3 && spec.k <= 5) {
    for (double u : grid) {
      if (!(u > 0.05 && u < 0.95)) continue;
      report.psi_max_dev = std::max(report.psi_max_dev, psi_crosscheck(spec, d, u));
    }
  } else {
    report.psi_skipped = true;
  }

  struct Lemma1Case {
    double m;
    int r;
    std::function<double(double)> qhat;
  };
  const Lemma1Case cases[] = {
      {1.0, 0, [](double) { return 1.0; }},
      {1.0, 1, [](double z) { return z; }},
      {2.0, 2, [](double z) { return z * z; }},
      {2.0, 3, [](double z) { return z * z * z; }},
  };
  for (const auto& c : cases)
    for (double u : {0.25, 0.5, 0.75})
      report.lemma1_max_dev = std::max(report.lemma1_max_dev, lemma1_check(c.m, c.r, c.qhat, u));

  return report;
}

VerificationReport full_report(const AuctionSpec& spec, const Distribution& d) {
  const std::vector<double> grid = default_grid();
  return full_report(spec, d, grid);
}

nlohmann::json report_to_json(const VerificationReport& report) {
  nlohmann::json j;
  j["spec"] = {{"n", report.spec.n}, {"k", report.spec.k}};
  j["distribution"] = report.dist_id;
  j["grid"] = report.grid;
  if (report.residuals_skipped) {
    j["residuals"] = "skipped";
  } else {
    j["residuals"] = report.residuals;
  }
  j["monotone"] = report.monotone.monotone;
  j["min_slope"] = report.monotone.min_slope;
  if (report.psi_skipped) {
    j["psi_max_dev"] = "skipped";
  } else {
    j["psi_max_dev"] = report.psi_max_dev;
  }
  j["lemma1_max_dev"] = report.lemma1_max_dev;
  j["tolerances"] = {{"residual", report.tolerances.residual},
                     {"psi", report.tolerances.psi},
                     {"lemma1", report.tolerances.lemma1}};
  j["passed"] = report.passed();
  return j;
}

}  // namespace kauction
