#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace kauction {

// Gauss-Legendre rule on [-1,1]; nodes/weights found once by Newton
// iteration on the Legendre polynomial.
class GaussLegendre {
public:
  explicit GaussLegendre(int num_nodes);

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      acc += weights_[i] * f(mid + half * nodes_[i]);
    return half * acc;
  }

  static const GaussLegendre& rule64();

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// 64-node rule over one panel.
template <typename F>
double integrate_gl64(F&& f, double a, double b) {
  return GaussLegendre::rule64().integrate(f, a, b);
}

// Composite 64-node rule over 2*levels panels refined dyadically toward
// both endpoints (breakpoints at 2^-levels .. 1/2 .. 1-2^-levels of the
// interval). Handles integrands with branch points at or just beyond
// either endpoint at fixed, deterministic cost.
template <typename F>
double integrate_gl64_dyadic(F&& f, double a, double b, int levels = 3) {
  const auto& rule = GaussLegendre::rule64();
  double frac_lo = 0.0;
  double acc = 0.0;
  for (int i = levels; i >= 1; --i) {
    const double frac_hi = std::ldexp(1.0, -i);  // 2^-i
    acc += rule.integrate(f, a + (b - a) * frac_lo, a + (b - a) * frac_hi);
    frac_lo = frac_hi;
  }
  for (int i = 2; i <= levels; ++i) {
    const double frac_hi = 1.0 - std::ldexp(1.0, -i);
    acc += rule.integrate(f, a + (b - a) * frac_lo, a + (b - a) * frac_hi);
    frac_lo = frac_hi;
  }
  acc += rule.integrate(f, a + (b - a) * frac_lo, b);
  return acc;
}

// Minimal symmetric central-difference stencil for the d-th derivative
// (error O(h^2)). Offsets are integers times h; odd orders use the
// averaged stencil so no half-steps appear.
struct CentralStencil {
  std::vector<int> offsets;
  std::vector<double> coeffs;  // divide by h^d after the dot product
};

CentralStencil central_stencil(int derivative_order);

double central_derivative(const std::function<double(double)>& f, double u, int derivative_order,
                          double h);

// One Richardson step over h and 2h: cancels the O(h^2) term.
double central_derivative_richardson(const std::function<double(double)>& f, double u,
                                     int derivative_order, double h);

// Widest stencil offset (in units of h) used by the Richardson form.
int richardson_stencil_halfwidth(int derivative_order);

}  // namespace kauction
