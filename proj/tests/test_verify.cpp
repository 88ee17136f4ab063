#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "kauction/distribution.hpp"
#include "kauction/equilibrium.hpp"
#include "kauction/quadrature.hpp"
#include "kauction/verify.hpp"

using kauction::AuctionSpec;
using kauction::Distribution;

namespace {

std::vector<Distribution> builtins() {
  return {Distribution::uniform(), Distribution::power(2.0), Distribution::power(0.5),
          Distribution::exponential(1.0), Distribution::fat_tail(2.0)};
}

// Equilibrium bid as a function of the opponent quantile, the shape
// characterization_residual consumes.
auto beta_of(const AuctionSpec spec, const Distribution d) {
  return [spec, d](double z) { return kauction::bid_generic(spec, d, z); };
}

}  // namespace

TEST_CASE("64-node Gauss-Legendre is exact through degree 127") {
  auto poly = [](double x) { return std::pow(x, 126); };
  CHECK(kauction::integrate_gl64(poly, -1.0, 1.0) ==
        doctest::Approx(2.0 / 127.0).epsilon(1e-12));
  auto odd = [](double x) { return std::pow(x, 31); };
  CHECK(std::abs(kauction::integrate_gl64(odd, -1.0, 1.0)) <= 1e-14);
  auto quintic = [](double x) { return x * x * x * x * x; };
  CHECK(kauction::integrate_gl64(quintic, 0.0, 1.0) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  auto expf = [](double x) { return std::exp(x); };
  CHECK(kauction::integrate_gl64(expf, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
}

TEST_CASE("dyadic composite rule tames endpoint branch points") {
  auto sqrtf = [](double z) { return std::sqrt(z); };
  const double single = kauction::integrate_gl64(sqrtf, 0.0, 1.0);
  const double dyadic = kauction::integrate_gl64_dyadic(sqrtf, 0.0, 1.0);
  const double exact = 2.0 / 3.0;
  CHECK(std::abs(dyadic - exact) < std::abs(single - exact));
  CHECK(std::abs(dyadic - exact) <= 1e-7);

  // Branch point at the upper end.
  auto upper = [](double z) { return std::sqrt(1.0 - z); };
  CHECK(kauction::integrate_gl64_dyadic(upper, 0.0, 1.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-7));

  // Polynomial exactness survives the splitting.
  auto cubic = [](double z) { return z * z * z; };
  CHECK(kauction::integrate_gl64_dyadic(cubic, 0.0, 1.0) ==
        doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("central stencils annihilate low powers and normalize d!") {
  for (int d = 1; d <= 4; ++d) {
    const kauction::CentralStencil st = kauction::central_stencil(d);
    REQUIRE(st.offsets.size() == st.coeffs.size());
    double fact = 1.0;
    for (int j = 2; j <= d; ++j) fact *= j;
    for (int m = 0; m <= d; ++m) {
      double dot = 0.0;
      for (std::size_t i = 0; i < st.offsets.size(); ++i)
        dot += st.coeffs[i] * std::pow(static_cast<double>(st.offsets[i]), m);
      CHECK(dot == doctest::Approx(m == d ? fact : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("stencil tables for the first two orders") {
  const auto s1 = kauction::central_stencil(1);
  REQUIRE(s1.offsets == std::vector<int>{1, 0, -1});
  CHECK(s1.coeffs == std::vector<double>{0.5, 0.0, -0.5});
  const auto s2 = kauction::central_stencil(2);
  REQUIRE(s2.offsets == std::vector<int>{1, 0, -1});
  CHECK(s2.coeffs == std::vector<double>{1.0, -2.0, 1.0});
}

TEST_CASE("central derivatives of exp recover exp") {
  auto f = [](double x) { return std::exp(x); };
  const double h = 1e-3;
  CHECK(kauction::central_derivative(f, 0.0, 1, h) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(kauction::central_derivative(f, 0.0, 2, h) == doctest::Approx(1.0).epsilon(1e-6));
  // Richardson removes the O(h^2) term; roundoff ~eps/h^d bounds the rest.
  CHECK(kauction::central_derivative_richardson(f, 0.0, 1, h) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kauction::central_derivative_richardson(f, 0.0, 2, h) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kauction::central_derivative_richardson(f, 0.0, 3, h) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(kauction::central_derivative_richardson(f, 0.0, 4, h) ==
        doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("richardson stencil halfwidths") {
  CHECK(kauction::richardson_stencil_halfwidth(1) == 2);
  CHECK(kauction::richardson_stencil_halfwidth(2) == 2);
  CHECK(kauction::richardson_stencil_halfwidth(3) == 4);
  CHECK(kauction::richardson_stencil_halfwidth(4) == 4);
}

TEST_CASE("characterization residual vanishes for the uniform equilibrium") {
  const AuctionSpec spec{5, 3};
  auto beta = [](double z) { return (4.0 / 3.0) * z; };
  for (double u : {0.3, 0.5, 0.9})
    CHECK(std::abs(kauction::characterization_residual(spec, Distribution::uniform(), beta, u)) <=
          1e-14);
}

TEST_CASE("characterization residual detects non-equilibrium bids") {
  const AuctionSpec spec{5, 3};
  // Truthful bidding is wrong for k=3: residual is exactly
  // (u^4/12)/(u^4/3) = 1/4 for the uniform law.
  auto truthful = [](double z) { return z; };
  CHECK(kauction::characterization_residual(spec, Distribution::uniform(), truthful, 0.5) ==
        doctest::Approx(0.25).epsilon(1e-12));
  // A +1% inflation of the equilibrium shifts the residual to -0.01.
  auto inflated = [](double z) { return 1.01 * (4.0 / 3.0) * z; };
  const double r =
      kauction::characterization_residual(spec, Distribution::uniform(), inflated, 0.5);
  CHECK(r == doctest::Approx(-0.01).epsilon(1e-10));
  CHECK(std::abs(r) >= 1e-3);
}

TEST_CASE("characterization residual certifies bid_generic equilibria") {
  const std::vector<std::pair<AuctionSpec, Distribution>> cases = {
      {{10, 5}, Distribution::exponential(1.0)},
      {{10, 5}, Distribution::fat_tail(2.0)},
      {{12, 11}, Distribution::power(2.0)},
      {{7, 3}, Distribution::power(0.5)},
  };
  for (const auto& [spec, d] : cases)
    for (double u : {0.25, 0.5, 0.995})
      CHECK(std::abs(kauction::characterization_residual(spec, d, beta_of(spec, d), u)) <= 1e-8);
}

TEST_CASE("characterization residual argument errors") {
  auto beta = [](double z) { return z; };
  CHECK_THROWS_AS(kauction::characterization_residual({5, 2}, Distribution::uniform(), beta, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(kauction::characterization_residual({5, 3}, Distribution::uniform(), beta, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(
      kauction::characterization_residual({5, 3}, Distribution::uniform(), beta, 1e-7),
      std::domain_error);
}

TEST_CASE("check_monotone") {
  const auto curve =
      kauction::bid_curve({5, 3}, Distribution::uniform(), kauction::default_grid());
  const auto mono = kauction::check_monotone(curve);
  CHECK(mono.monotone);
  CHECK(mono.min_slope == doctest::Approx(4.0 / 3.0).epsilon(1e-10));

  const auto exp_curve =
      kauction::bid_curve({5, 4}, Distribution::exponential(1.0), kauction::default_grid());
  CHECK(kauction::check_monotone(exp_curve).monotone);

  kauction::BidCurve flat{{5, 3}, "uniform", {{0.2, 0.2, 1.0}, {0.4, 0.4, 1.0}}};
  const auto flat_mono = kauction::check_monotone(flat);
  CHECK_FALSE(flat_mono.monotone);
  CHECK(flat_mono.min_slope == 0.0);

  kauction::BidCurve tiny{{5, 3}, "uniform", {{0.2, 0.2, 1.0}}};
  CHECK_THROWS_AS(kauction::check_monotone(tiny), std::invalid_argument);
}

TEST_CASE("psi recursion reproduces the jet derivative of gamma") {
  CHECK(kauction::psi_crosscheck({5, 3}, Distribution::uniform(), 0.5) <= 1e-6);
  // The quantity under test: gamma'(0.5) = 4 * 0.5^3 = 0.5 for gamma = u^4.
  CHECK(kauction::gamma_jet(Distribution::uniform(), 0.5, 5, 1).derivative(1) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(kauction::psi_crosscheck({6, 4}, Distribution::exponential(1.0), 0.5) <= 1e-4);

  for (const auto& d : builtins())
    for (int k : {3, 4, 5})
      for (double u : {0.1, 0.3, 0.5, 0.7, 0.9})
        CHECK(kauction::psi_crosscheck({12, k}, d, u) <= 1e-4);

  CHECK_THROWS_AS(kauction::psi_crosscheck({5, 2}, Distribution::uniform(), 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(kauction::psi_crosscheck({5, 3}, Distribution::uniform(), 0.02),
                  std::domain_error);
}

TEST_CASE("kernel integral derivative identity") {
  auto one = [](double) { return 1.0; };
  auto lin = [](double z) { return z; };
  auto sq = [](double z) { return z * z; };
  auto cube = [](double z) { return z * z * z; };
  // H_0(u) = u^2/2 for qhat=1, m=1: first derivative u, so the oracle
  // target at u=0.5 is 0.5; the r=1 and r=2 rows target 0.25 and 0.125.
  CHECK(kauction::lemma1_check(1.0, 0, one, 0.5) <= 1e-8);
  CHECK(kauction::lemma1_check(1.0, 1, lin, 0.5) <= 1e-3);
  CHECK(kauction::lemma1_check(2.0, 2, sq, 0.5) <= 1e-3);
  CHECK(kauction::lemma1_check(2.0, 3, cube, 0.5) <= 1e-3);
  for (double u : {0.25, 0.5, 0.75}) {
    CHECK(kauction::lemma1_check(1.0, 0, one, u) <= 1e-8);
    CHECK(kauction::lemma1_check(1.0, 1, lin, u) <= 1e-3);
    CHECK(kauction::lemma1_check(2.0, 2, sq, u) <= 1e-3);
  }
  CHECK_THROWS_AS(kauction::lemma1_check(0.0, 0, one, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(kauction::lemma1_check(1.0, 4, one, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(kauction::lemma1_check(1.0, 0, one, 0.95), std::domain_error);
}

TEST_CASE("full_report aggregates the checks") {
  const auto uniform_report = kauction::full_report({5, 3}, Distribution::uniform());
  CHECK(uniform_report.passed());
  CHECK(uniform_report.monotone.monotone);
  CHECK_FALSE(uniform_report.residuals_skipped);
  CHECK(uniform_report.max_abs_residual() <= 1e-12);
  CHECK_FALSE(uniform_report.psi_skipped);
  CHECK(uniform_report.psi_max_dev <= 1e-6);
  CHECK(uniform_report.lemma1_max_dev <= 1e-3);
  CHECK(uniform_report.residuals.size() == uniform_report.grid.size());

  const auto exp_report = kauction::full_report({10, 5}, Distribution::exponential(1.0));
  CHECK(exp_report.passed());
  CHECK(exp_report.max_abs_residual() <= 1e-8);

  // k=2 is truthful: nothing to verify beyond monotonicity.
  const auto vickrey = kauction::full_report({5, 2}, Distribution::uniform());
  CHECK(vickrey.passed());
  CHECK(vickrey.residuals_skipped);
  CHECK(vickrey.psi_skipped);

  // FD depth caps the psi check at k=5.
  const auto deep = kauction::full_report({12, 8}, Distribution::uniform());
  CHECK(deep.passed());
  CHECK(deep.psi_skipped);
  CHECK_FALSE(deep.residuals_skipped);
}

TEST_CASE("report serialization carries the documented keys") {
  const auto report = kauction::full_report({5, 3}, Distribution::uniform());
  const nlohmann::json j = kauction::report_to_json(report);
  for (const char* key : {"spec", "distribution", "grid", "residuals", "monotone", "min_slope",
                          "psi_max_dev", "lemma1_max_dev", "tolerances", "passed"})
    CHECK(j.contains(key));
  CHECK(j["spec"]["n"] == 5);
  CHECK(j["spec"]["k"] == 3);
  CHECK(j["distribution"] == "uniform");
  CHECK(j["passed"] == true);
  CHECK(j["residuals"].is_array());
  CHECK(j["residuals"].size() == report.grid.size());

  const auto vickrey = kauction::report_to_json(kauction::full_report({5, 2}, Distribution::uniform()));
  CHECK(vickrey["residuals"] == "skipped");
  CHECK(vickrey["psi_max_dev"] == "skipped");
}
