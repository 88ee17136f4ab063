#include "kauction/equilibrium.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kauction {

namespace {

// C(n-2, k-2) as a running product; safe far beyond the n used here.
double binom_n2_k2(int n, int k) {
  double result = 1.0;
  for (int j = 1; j <= k - 2; ++j)
    result *= static_cast<double>(n - 2 - (k - 2) + j) / static_cast<double>(j);
  return result;
}

}  // namespace

std::vector<double> default_grid(std::size_t size) {
  if (size < 2) throw std::invalid_argument("grid needs at least 2 points");
  constexpr double kLo = 0.005, kHi = 0.995;
  std::vector<double> grid(size);
  for (std::size_t i = 0; i < size; ++i)
    grid[i] = kLo + (kHi - kLo) * static_cast<double>(i) / static_cast<double>(size - 1);
  return grid;
}

double bid_generic(const AuctionSpec& spec, const Distribution& d, double u) {
  spec.validate();
  if (spec.k == 2) return d.quantile(u);
  const std::size_t order = static_cast<std::size_t>(spec.k - 2);
  Jet q = d.quantile_jet(u, order);
  // Term i carries C(k-2,i) (n-k)!/(n-k+i)! u^i Q^(i)(u). Absorbing the
  // i! of Q^(i) = i! coeff(i) into the binomial leaves the falling/rising
  // factorial ratio rho below, built one factor at a time.
  double beta = q.coeff(0);
  double rho = 1.0;
  double u_pow = 1.0;
  for (std::size_t i = 1; i <= order; ++i) {
    rho *= static_cast<double>(spec.k - 1 - static_cast<int>(i)) /
           static_cast<double>(spec.n - spec.k + static_cast<int>(i));
    u_pow *= u;
    beta += rho * u_pow * q.coeff(i);
  }
  return beta;
}

double bid_gamma_form(const AuctionSpec& spec, const Distribution& d, double u) {
  spec.validate();
  if (spec.k == 2) return d.quantile(u);
  const std::size_t order = static_cast<std::size_t>(spec.k - 2);
  Jet gamma = gamma_jet(d, u, spec.n, order);
  // beta = gamma^(k-2)(u) / ((k-2)! C(n-2,k-2) u^(n-k)); the (k-2)!
  // cancels against the normalized jet coefficient.
  double denom = binom_n2_k2(spec.n, spec.k) * std::pow(u, spec.n - spec.k);
  return gamma.coeff(order) / denom;
}

double bid_closed_power(const AuctionSpec& spec, double alpha, double x) {
  spec.validate();
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("x outside [0,1]");
  double coeff = 1.0;
  for (int j = 1; j <= spec.k - 2; ++j)
    coeff *= (static_cast<double>(spec.n - 1 - j) + 1.0 / alpha) /
             static_cast<double>(spec.n - 1 - j);
  return coeff * x;
}

double bid_closed_exponential(const AuctionSpec& spec, double lambda, double u) {
  spec.validate();
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("u outside (0,1)");
  // Q^(i)(u) = (i-1)! / (lambda (1-u)^i), so term i is
  // C(k-2,i) (n-k)!/(n-k+i)! (i-1)! (u/(1-u))^i / lambda.
  double beta = -std::log1p(-u) / lambda;
  double binom = 1.0;
  double ratio_pow = 1.0;
  double recip_rising = 1.0;
  double fact_im1 = 1.0;
  const double ratio = u / (1.0 - u);
  for (int i = 1; i <= spec.k - 2; ++i) {
    binom *= static_cast<double>(spec.k - 2 - i + 1) / static_cast<double>(i);
    recip_rising /= static_cast<double>(spec.n - spec.k + i);
    if (i >= 2) fact_im1 *= static_cast<double>(i - 1);
    ratio_pow *= ratio;
    beta += binom * recip_rising * fact_im1 * ratio_pow / lambda;
  }
  return beta;
}

double bid_closed_fattail(const AuctionSpec& spec, double c, double u) {
  spec.validate();
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("u outside (0,1)");
  // Q^(i)(u) = (1/c)(1/c+1)...(1/c+i-1) (1-u)^(-1/c-i).
  const double inv_c = 1.0 / c;
  double beta = std::pow(1.0 - u, -inv_c);
  double binom = 1.0;
  double recip_rising = 1.0;
  double rising_c = 1.0;
  double u_pow = 1.0;
  for (int i = 1; i <= spec.k - 2; ++i) {
    binom *= static_cast<double>(spec.k - 2 - i + 1) / static_cast<double>(i);
    recip_rising /= static_cast<double>(spec.n - spec.k + i);
    rising_c *= inv_c + static_cast<double>(i - 1);
    u_pow *= u;
    beta += binom * recip_rising * rising_c * u_pow * std::pow(1.0 - u, -inv_c - i);
  }
  return beta;
}

double bid_asymptotic(const AuctionSpec& spec, const Distribution& d, double u) {
  spec.validate();
  if (spec.k < 3) throw std::invalid_argument("bid_asymptotic requires k >= 3");
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("u outside (0,1)");
  // F/f at x = Q(u) equals u Q'(u), which keeps the formula in quantile
  // space and free of any density evaluation.
  Jet q = d.quantile_jet(u, 1);
  double f_over_f = u * q.coeff(1);
  return q.coeff(0) +
         static_cast<double>(spec.k - 2) / static_cast<double>(spec.n - spec.k + 1) * f_over_f;
}

BidCurve bid_curve(const AuctionSpec& spec, const Distribution& d, std::span<const double> grid) {
  spec.validate();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0))
      throw std::domain_error("bid_curve: grid point " + std::to_string(i) + " outside (0,1)");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("bid_curve: grid not strictly increasing at index " +
                                  std::to_string(i));
  }
  BidCurve curve{spec, d.id(), {}};
  curve.points.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      double u = grid[i];
      curve.points.push_back(BidPoint{u, d.quantile(u), bid_generic(spec, d, u)});
    } catch (const std::exception& e) {
      throw std::domain_error("bid_curve: grid index " + std::to_string(i) + " (u=" +
                              std::to_string(grid[i]) + "): " + e.what());
    }
  }
  return curve;
}

}  // namespace kauction
