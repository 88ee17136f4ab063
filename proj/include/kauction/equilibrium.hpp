#pragma once

#include <span>
#include <vector>

#include "kauction/auction.hpp"
#include "kauction/distribution.hpp"

namespace kauction {

// Default quantile grid: 101 equally spaced points on [0.005, 0.995].
// Endpoints of (0,1) are excluded because quantile derivatives of the
// unbounded families diverge there.
std::vector<double> default_grid(std::size_t size = 101);

// Equilibrium bid at quantile u for any distribution, via the derivative
// sum beta = sum_{i=0..k-2} C(k-2,i) (n-k)!/(n-k+i)! u^i Q^(i)(u).
// For k=2 the sum collapses to Q(u): the truthful second-price case.
double bid_generic(const AuctionSpec& spec, const Distribution& d, double u);

// Same bid through gamma^(k-2)(u) / ((k-2)! C(n-2,k-2) u^(n-k)). Kept as
// an independent route for cross-checks; it loses accuracy as u -> 0
// where numerator and denominator both vanish.
double bid_gamma_form(const AuctionSpec& spec, const Distribution& d, double u);

// Closed form for F(x) = x^alpha: a linear bid c(n,k,alpha) * x with the
// coefficient evaluated as a telescoping product of k-2 factors.
double bid_closed_power(const AuctionSpec& spec, double alpha, double x);

// Closed form for F(x) = 1 - e^(-lambda x), evaluated at quantile u.
double bid_closed_exponential(const AuctionSpec& spec, double lambda, double u);

// Closed form for F(x) = 1 - x^(-c), evaluated at quantile u.
double bid_closed_fattail(const AuctionSpec& spec, double c, double u);

// Large-n approximation x + (k-2)/(n-k+1) F(x)/f(x); exact for k = 3.
double bid_asymptotic(const AuctionSpec& spec, const Distribution& d, double u);

// Samples bid_generic over a strictly increasing grid in (0,1).
BidCurve bid_curve(const AuctionSpec& spec, const Distribution& d, std::span<const double> grid);

}  // namespace kauction
