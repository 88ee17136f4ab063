#pragma once

#include <stdexcept>
#include <vector>

#include "kauction/distribution.hpp"

namespace kauction {

// A kth price auction: n bidders, highest bid wins, winner pays the kth
// highest bid. Requires k >= 2 and n > k.
struct AuctionSpec {
  int n = 0;
  int k = 0;

  void validate() const {
    if (k < 2) throw std::invalid_argument("auction spec: k must be at least 2");
    if (n <= k) throw std::invalid_argument("auction spec: n must exceed k");
  }
};

struct BidPoint {
  double u;     // quantile
  double x;     // valuation Q(u)
  double beta;  // equilibrium bid
};

// Equilibrium bid function sampled over a quantile grid.
struct BidCurve {
  AuctionSpec spec;
  std::string dist_id;
  std::vector<BidPoint> points;
};

}  // namespace kauction
