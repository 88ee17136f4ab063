#include "kauction/quadrature.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace kauction {

namespace {

// P_n(x) and P_n'(x) via the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p_prev = 1.0;  // P_0
  double p = x;         // P_1
  for (int j = 2; j <= n; ++j) {
    const double p_next = ((2.0 * j - 1.0) * x * p - (j - 1.0) * p_prev) / j;
    p_prev = p;
    p = p_next;
  }
  const double dp = n * (x * p - p_prev) / (x * x - 1.0);
  return {p, dp};
}

}  // namespace

GaussLegendre::GaussLegendre(int num_nodes) {
  if (num_nodes < 2) throw std::invalid_argument("GaussLegendre: need at least 2 nodes");
  const int n = num_nodes;
  nodes_.resize(static_cast<std::size_t>(n));
  weights_.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  const double pi = std::acos(-1.0);
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess, then Newton to machine precision.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, d] = legendre_with_derivative(n, x);
      dp = d;
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        const auto [p2, d2] = legendre_with_derivative(n, x);
        dp = d2;
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[static_cast<std::size_t>(i)] = -x;
    weights_[static_cast<std::size_t>(i)] = w;
    nodes_[static_cast<std::size_t>(n - 1 - i)] = x;
    weights_[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

const GaussLegendre& GaussLegendre::rule64() {
  static const GaussLegendre rule(64);
  return rule;
}

CentralStencil central_stencil(int derivative_order) {
  if (derivative_order < 1) throw std::invalid_argument("central_stencil: order must be >= 1");
  const int d = derivative_order;
  // d-th binomial difference: (-1)^j C(d, j).
  std::vector<double> base(static_cast<std::size_t>(d) + 1);
  base[0] = 1.0;
  for (int j = 1; j <= d; ++j)
    base[static_cast<std::size_t>(j)] =
        -base[static_cast<std::size_t>(j - 1)] * (d - j + 1) / static_cast<double>(j);

  CentralStencil st;
  if (d % 2 == 0) {
    for (int j = 0; j <= d; ++j) {
      st.offsets.push_back(d / 2 - j);
      st.coeffs.push_back(base[static_cast<std::size_t>(j)]);
    }
  } else {
    // Half-integer offsets averaged onto the integer grid.
    for (int i = 0; i <= d + 1; ++i) {
      double c = 0.0;
      if (i <= d) c += base[static_cast<std::size_t>(i)];
      if (i >= 1) c += base[static_cast<std::size_t>(i - 1)];
      st.offsets.push_back((d + 1) / 2 - i);
      st.coeffs.push_back(0.5 * c);
    }
  }
  return st;
}

double central_derivative(const std::function<double(double)>& f, double u, int derivative_order,
                          double h) {
  const CentralStencil st = central_stencil(derivative_order);
  double acc = 0.0;
  for (std::size_t i = 0; i < st.offsets.size(); ++i) {
    if (st.coeffs[i] == 0.0) continue;
    acc += st.coeffs[i] * f(u + st.offsets[i] * h);
  }
  return acc / std::pow(h, derivative_order);
}

double central_derivative_richardson(const std::function<double(double)>& f, double u,
                                     int derivative_order, double h) {
  const double coarse = central_derivative(f, u, derivative_order, 2.0 * h);
  const double fine = central_derivative(f, u, derivative_order, h);
  return (4.0 * fine - coarse) / 3.0;
}

int richardson_stencil_halfwidth(int derivative_order) {
  const int d = derivative_order;
  const int max_offset = (d % 2 == 0) ? d / 2 : (d + 1) / 2;
  return 2 * max_offset;
}

}  // namespace kauction
