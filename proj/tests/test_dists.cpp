#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "kauction/distribution.hpp"
#include "kauction/equilibrium.hpp"

using kauction::Distribution;
using kauction::Jet;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

std::vector<Distribution> builtins() {
  return {Distribution::uniform(), Distribution::power(2.0), Distribution::power(0.5),
          Distribution::exponential(1.0), Distribution::fat_tail(2.0)};
}

// FD oracle in long double. The stencil itself must run in extended
// precision: double roundoff alone contributes ~1e-4 relative noise to a
// 4th derivative at h=1e-3, swamping the 1e-5 agreement being asserted.
using LdFun = long double (*)(long double);

template <typename F>
long double ld_stencil(F&& f, long double u, long double h, int i) {
  switch (i) {
    case 1: return (f(u + h) - f(u - h)) / (2 * h);
    case 2: return (f(u + h) - 2 * f(u) + f(u - h)) / (h * h);
    case 3:
      return (f(u + 2 * h) - 2 * f(u + h) + 2 * f(u - h) - f(u - 2 * h)) / (2 * h * h * h);
    default:
      return (f(u + 2 * h) - 4 * f(u + h) + 6 * f(u) - 4 * f(u - h) + f(u - 2 * h)) /
             (h * h * h * h);
  }
}

template <typename F>
double fd_richardson(F&& f, double u, int i) {
  const long double h = 1e-3L;
  return static_cast<double>((4.0L * ld_stencil(f, u, h, i) - ld_stencil(f, u, 2 * h, i)) /
                             3.0L);
}

struct LdFamily {
  Distribution dist;
  LdFun quantile;
};

std::vector<LdFamily> ld_families() {
  return {
      {Distribution::uniform(), [](long double u) { return u; }},
      {Distribution::power(2.0), [](long double u) { return powl(u, 0.5L); }},
      {Distribution::power(0.5), [](long double u) { return u * u; }},
      {Distribution::power(3.0), [](long double u) { return powl(u, 1.0L / 3.0L); }},
      {Distribution::exponential(1.0), [](long double u) { return -log1pl(-u); }},
      {Distribution::fat_tail(2.0), [](long double u) { return powl(1.0L - u, -0.5L); }},
  };
}

// Analytic derivative tables used as oracles against quantile_jet.
double power_q_deriv(double alpha, double u, int i) {
  const double p = 1.0 / alpha;
  double coef = 1.0;
  for (int j = 0; j < i; ++j) coef *= p - j;
  return coef * std::pow(u, p - i);
}

double exp_q_deriv(double lambda, double u, int i) {
  if (i == 0) return -std::log1p(-u) / lambda;
  double fact = 1.0;
  for (int j = 2; j < i; ++j) fact *= j;  // (i-1)!
  return fact / (lambda * std::pow(1.0 - u, i));
}

double fattail_q_deriv(double c, double u, int i) {
  double coef = 1.0;
  for (int j = 0; j < i; ++j) coef *= 1.0 / c + j;
  return coef * std::pow(1.0 - u, -1.0 / c - i);
}

}  // namespace

TEST_CASE("cdf examples") {
  CHECK(Distribution::uniform().cdf(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(Distribution::exponential(1.0).cdf(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(Distribution::fat_tail(2.0).cdf(std::sqrt(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(Distribution::uniform().cdf(-0.1), std::domain_error);
  CHECK_THROWS_AS(Distribution::fat_tail(2.0).cdf(0.5), std::domain_error);
  // Values above a finite upper clamp to 1.
  CHECK(Distribution::uniform().cdf(1.5) == 1.0);
}

TEST_CASE("quantile examples") {
  CHECK(Distribution::power(2.0).quantile(0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(Distribution::exponential(1.0).quantile(0.0) == 0.0);
  CHECK(Distribution::fat_tail(2.0).quantile(0.75) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(Distribution::uniform().quantile(-0.01), std::domain_error);
  CHECK_THROWS_AS(Distribution::uniform().quantile(1.01), std::domain_error);
  // u=1 needs a finite upper end.
  CHECK(Distribution::uniform().quantile(1.0) == 1.0);
  CHECK_THROWS_AS(Distribution::exponential(1.0).quantile(1.0), std::range_error);
}

TEST_CASE("pdf examples and lower-endpoint policy") {
  CHECK(Distribution::uniform().pdf(0.7) == 1.0);
  CHECK(Distribution::exponential(2.0).pdf(0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(Distribution::power(2.0).pdf(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(Distribution::uniform().pdf(-0.2), std::domain_error);
  CHECK_THROWS_AS(Distribution::uniform().pdf(1.0), std::domain_error);
  // Density of power(alpha<1) diverges at the lower end.
  CHECK_THROWS_AS(Distribution::power(0.5).pdf(0.0), std::domain_error);
}

TEST_CASE("pdf matches a central difference of the cdf") {
  const double h = 1e-5;
  for (const auto& d : builtins()) {
    for (double u : {0.2, 0.5, 0.8}) {
      const double x = d.quantile(u);
      const double fd = (d.cdf(x + h) - d.cdf(x - h)) / (2 * h);
      CHECK(std::abs(fd - d.pdf(x)) <= 1e-6 * d.pdf(x));
    }
  }
}

TEST_CASE("round trips: F(Q(u)) = u and Q(F(x)) = x on the default grid") {
  for (const auto& d : builtins()) {
    for (double u : kauction::default_grid()) {
      const double x = d.quantile(u);
      CHECK(std::abs(d.cdf(x) - u) <= 1e-12);
      CHECK(rel_err(d.quantile(d.cdf(x)), x) <= 1e-12);
    }
  }
}

TEST_CASE("quantile_jet examples") {
  const Jet ju = Distribution::uniform().quantile_jet(0.5, 2);
  CHECK(ju.coeff(0) == 0.5);
  CHECK(ju.coeff(1) == 1.0);
  CHECK(ju.coeff(2) == 0.0);

  // Q^(i) = (i-1)!/(lambda (1-u)^i): Q=ln 2, Q'=2, Q''=4 at u=1/2.
  const Jet je = Distribution::exponential(1.0).quantile_jet(0.5, 2);
  CHECK(je.derivative(0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(je.derivative(1) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(je.derivative(2) == doctest::Approx(4.0).epsilon(1e-13));

  const Jet jp = Distribution::power(2.0).quantile_jet(0.25, 1);
  CHECK(jp.derivative(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(jp.derivative(1) == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS(Distribution::exponential(1.0).quantile_jet(0.0, 2), std::domain_error);
  CHECK_THROWS_AS(Distribution::exponential(1.0).quantile_jet(1.0, 2), std::domain_error);
}

TEST_CASE("quantile_jet matches closed-form derivatives to 1e-10") {
  for (double u : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const Jet jp = Distribution::power(2.0).quantile_jet(u, 5);
    const Jet jp3 = Distribution::power(3.0).quantile_jet(u, 5);
    const Jet je = Distribution::exponential(0.7).quantile_jet(u, 5);
    const Jet jf = Distribution::fat_tail(2.5).quantile_jet(u, 5);
    for (int i = 0; i <= 5; ++i) {
      CHECK(rel_err(jp.derivative(i), power_q_deriv(2.0, u, i)) < 1e-10);
      CHECK(rel_err(jp3.derivative(i), power_q_deriv(3.0, u, i)) < 1e-10);
      CHECK(rel_err(je.derivative(i), exp_q_deriv(0.7, u, i)) < 1e-10);
      CHECK(rel_err(jf.derivative(i), fattail_q_deriv(2.5, u, i)) < 1e-10);
    }
  }
}

TEST_CASE("order-1 jet coefficient is 1/f(Q(u))") {
  for (const auto& d : builtins()) {
    for (double u : {0.15, 0.5, 0.85}) {
      const double x = d.quantile(u);
      CHECK(rel_err(d.quantile_jet(u, 1).derivative(1), 1.0 / d.pdf(x)) < 1e-10);
    }
  }
}

TEST_CASE("jet derivatives match finite differences of Q") {
  for (const auto& [dist, quantile] : ld_families()) {
    for (double u : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const Jet jet = dist.quantile_jet(u, 4);
      for (int i = 1; i <= 4; ++i) {
        const double fd = fd_richardson(quantile, u, i);
        CHECK(std::abs(jet.derivative(i) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("gamma_jet examples") {
  // Uniform, n=4: gamma(u) = u^3.
  const Jet g = kauction::gamma_jet(Distribution::uniform(), 0.5, 4, 1);
  CHECK(g.derivative(0) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(g.derivative(1) == doctest::Approx(0.75).epsilon(1e-14));

  // Power(alpha=2), n=4: gamma(u) = u^2.5, gamma'' = 2.5*1.5*sqrt(u).
  const Jet g2 = kauction::gamma_jet(Distribution::power(2.0), 0.25, 4, 2);
  CHECK(g2.derivative(2) == doctest::Approx(1.875).epsilon(1e-13));

  // Power(alpha=1) == uniform: gamma(u) = u^(n-1).
  const Jet g3 = kauction::gamma_jet(Distribution::power(1.0), 0.3, 6, 0);
  CHECK(g3.value() == doctest::Approx(std::pow(0.3, 5)).epsilon(1e-14));
}

TEST_CASE("gamma_jet matches finite differences of Q(u) u^(n-2)") {
  const int n = 6;
  for (const auto& [dist, quantile] : ld_families()) {
    auto gamma = [q = quantile](long double u) { return q(u) * powl(u, n - 2); };
    for (double u : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const Jet jet = kauction::gamma_jet(dist, u, n, 4);
      for (int i = 1; i <= 4; ++i) {
        const double fd = fd_richardson(gamma, u, i);
        CHECK(std::abs(jet.derivative(i) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("spec-string parsing round-trips builtin ids") {
  for (const auto& d : builtins()) {
    const Distribution back = Distribution::parse(d.id());
    CHECK(back.id() == d.id());
    CHECK(back.quantile(0.37) == doctest::Approx(d.quantile(0.37)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(Distribution::parse("weibull:k=2"), std::invalid_argument);
  CHECK_THROWS_AS(Distribution::parse("power:alpha=0"), std::invalid_argument);
  CHECK_THROWS_AS(Distribution::parse("power:alpha=nope"), std::invalid_argument);
  CHECK_THROWS_AS(Distribution::parse("exp:lambda=-2"), std::invalid_argument);
}

TEST_CASE("custom distribution from a quantile expression") {
  const Distribution d = Distribution::custom("u^2");
  CHECK(d.quantile(0.25) == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(d.support().lower == 0.0);
  CHECK(d.support().bounded());

  // u^2 is the power(alpha=1/2) quantile; jets must agree.
  const Distribution p = Distribution::power(0.5);
  for (double u : {0.2, 0.6, 0.9}) {
    const Jet a = d.quantile_jet(u, 4);
    const Jet b = p.quantile_jet(u, 4);
    for (int i = 0; i <= 4; ++i)
      CHECK(rel_err(a.derivative(i), b.derivative(i)) < 1e-12);
  }
}

TEST_CASE("custom distribution with unbounded upper end") {
  const Distribution d = Distribution::custom("0 - ln(1 - u)");
  const Distribution e = Distribution::exponential(1.0);
  CHECK(d.quantile(0.5) == doctest::Approx(e.quantile(0.5)).epsilon(1e-13));
  CHECK(d.cdf(2.0) == doctest::Approx(e.cdf(2.0)).epsilon(1e-10));
}

TEST_CASE("non-increasing quantile programs are rejected") {
  CHECK_THROWS_AS(Distribution::custom("1 - u"), std::invalid_argument);
  CHECK_THROWS_AS(Distribution::custom("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(Distribution::custom("u*)("), std::invalid_argument);
}

TEST_CASE("custom:file= parse path") {
  const char* path = "custom_quantile_test.txt";
  {
    std::ofstream out(path);
    out << "u^2 + u\n";
  }
  const Distribution d = Distribution::parse(std::string("custom:file=") + path);
  CHECK(d.quantile(0.5) == doctest::Approx(0.75).epsilon(1e-14));
  std::remove(path);
  CHECK_THROWS_AS(Distribution::parse("custom:file=/no/such/file.txt"), std::invalid_argument);
}
