#include "kauction/distribution.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kauction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_param(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_positive_real(std::string_view text, const char* what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0))
    throw std::invalid_argument(std::string("distribution spec: ") + what +
                                " must be a positive real, got '" + std::string(text) + "'");
  return value;
}

}  // namespace

Distribution Distribution::uniform() {
  return Distribution(DistKind::Uniform, 0.0, Support{0.0, 1.0}, "uniform");
}

Distribution Distribution::power(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("power distribution requires alpha > 0");
  return Distribution(DistKind::Power, alpha, Support{0.0, 1.0},
                      "power:alpha=" + format_param(alpha));
}

Distribution Distribution::exponential(double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("exponential distribution requires lambda > 0");
  return Distribution(DistKind::Exponential, lambda, Support{0.0, kInf},
                      "exp:lambda=" + format_param(lambda));
}

Distribution Distribution::fat_tail(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("fat-tail distribution requires c > 0");
  return Distribution(DistKind::FatTail, c, Support{1.0, kInf}, "fattail:c=" + format_param(c));
}

Distribution Distribution::custom(const std::string& quantile_text) {
  auto program = std::make_shared<const QuantileExpr>(QuantileExpr::parse(quantile_text));
  validate_quantile_program(*program);
  // Endpoint values of the program give the support; a huge upper value is
  // treated as an unbounded law (ln/negative powers diverge at u -> 1).
  double lower = program->eval(1e-9);
  if (std::abs(lower) < 1e-8) lower = 0.0;
  double upper;
  try {
    upper = program->eval(1.0 - 1e-12);
  } catch (const std::domain_error&) {
    upper = kInf;
  }
  if (!std::isfinite(upper) || upper > 1e12) upper = kInf;
  Distribution d(DistKind::Custom, 0.0, Support{lower, upper}, "custom:" + quantile_text);
  d.program_ = std::move(program);
  return d;
}

Distribution Distribution::parse(std::string_view spec) {
  if (spec == "uniform") return uniform();
  auto starts_with = [&](std::string_view prefix) {
    return spec.size() >= prefix.size() && spec.substr(0, prefix.size()) == prefix;
  };
  if (starts_with("power:alpha="))
    return power(parse_positive_real(spec.substr(12), "alpha"));
  if (starts_with("exp:lambda="))
    return exponential(parse_positive_real(spec.substr(11), "lambda"));
  if (starts_with("fattail:c="))
    return fat_tail(parse_positive_real(spec.substr(10), "c"));
  if (starts_with("custom:file=")) {
    std::string path(spec.substr(12));
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open quantile program file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return custom(buf.str());
  }
  throw std::invalid_argument(
      "unknown distribution spec '" + std::string(spec) +
      "' (expected uniform, power:alpha=<r>, exp:lambda=<r>, fattail:c=<r>, custom:file=<path>)");
}

double Distribution::cdf(double x) const {
  if (x < support_.lower)
    throw std::domain_error("cdf: x=" + std::to_string(x) + " below the support lower bound " +
                            std::to_string(support_.lower));
  if (support_.bounded() && x >= support_.upper) return 1.0;
  switch (kind_) {
    case DistKind::Uniform:
      return x;
    case DistKind::Power:
      return std::pow(x, param_);
    case DistKind::Exponential:
      return 1.0 - std::exp(-param_ * x);
    case DistKind::FatTail:
      return 1.0 - std::pow(x, -param_);
    case DistKind::Custom: {
      // Q is strictly increasing; invert by bisection in u.
      double lo = 0.0, hi = 1.0;
      for (int iter = 0; iter < 200 && hi - lo > 1e-16; ++iter) {
        double mid = 0.5 * (lo + hi);
        double q;
        try {
          q = program_->eval(mid);
        } catch (const std::domain_error&) {
          hi = mid;  // program diverged; x is below this quantile
          continue;
        }
        (q < x ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  throw std::logic_error("unreachable distribution kind");
}

double Distribution::pdf(double x) const {
  // The lower endpoint is admitted where the density extends continuously
  // (uniform, exponential, fat-tail); families whose density diverges
  // there fail the finiteness check below.
  bool inside = x >= support_.lower && (!support_.bounded() || x < support_.upper);
  if (!inside)
    throw std::domain_error("pdf: x=" + std::to_string(x) + " outside the support interior");
  const double f = [&] {
    switch (kind_) {
      case DistKind::Uniform:
        return 1.0;
      case DistKind::Power:
        return param_ * std::pow(x, param_ - 1.0);
      case DistKind::Exponential:
        return param_ * std::exp(-param_ * x);
      case DistKind::FatTail:
        return param_ * std::pow(x, -param_ - 1.0);
      case DistKind::Custom: {
        double u = cdf(x);
        double qprime = quantile_jet(u, 1).derivative(1);
        return 1.0 / qprime;
      }
    }
    throw std::logic_error("unreachable distribution kind");
  }();
  if (!std::isfinite(f))
    throw std::domain_error("pdf: density diverges at x=" + std::to_string(x));
  return f;
}

double Distribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::domain_error("quantile: u=" + std::to_string(u) + " outside [0,1]");
  if (u == 1.0 && !support_.bounded())
    throw std::range_error("quantile: u=1 diverges for an unbounded support");
  switch (kind_) {
    case DistKind::Uniform:
      return u;
    case DistKind::Power:
      return std::pow(u, 1.0 / param_);
    case DistKind::Exponential:
      return -std::log1p(-u) / param_;
    case DistKind::FatTail:
      return std::pow(1.0 - u, -1.0 / param_);
    case DistKind::Custom:
      return program_->eval(u);
  }
  throw std::logic_error("unreachable distribution kind");
}

Jet Distribution::quantile_jet(double u, std::size_t order) const {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("quantile_jet: u=" + std::to_string(u) +
                            " outside the open interval (0,1)");
  if (order > kMaxJetOrder) throw std::domain_error("quantile_jet: order exceeds cap of 12");
  Jet var = Jet::variable(u, order);
  switch (kind_) {
    case DistKind::Uniform:
      return var;
    case DistKind::Power:
      return pow(var, 1.0 / param_);
    case DistKind::Exponential:
      return ln(1.0 - var) * (-1.0 / param_);
    case DistKind::FatTail:
      return pow(1.0 - var, -1.0 / param_);
    case DistKind::Custom:
      return program_->eval(var);
  }
  throw std::logic_error("unreachable distribution kind");
}

Jet gamma_jet(const Distribution& d, double u, int n, std::size_t order) {
  if (n < 3) throw std::invalid_argument("gamma_jet requires n >= 3");
  Jet q = d.quantile_jet(u, order);
  Jet power_term = pow(Jet::variable(u, order), static_cast<double>(n - 2));
  return q * power_term;
}

}  // namespace kauction
