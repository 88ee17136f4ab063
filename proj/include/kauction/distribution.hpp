#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "kauction/jet.hpp"
#include "kauction/quantile_expr.hpp"

namespace kauction {

// Closed interval of valuations. upper may be +infinity.
struct Support {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  bool bounded() const { return std::isfinite(upper); }
};

enum class DistKind { Uniform, Power, Exponential, FatTail, Custom };

// A valuation law with strictly increasing continuous F and positive
// density on the interior of its support. Exposes F, f, Q and the jet of
// Q (value plus derivatives up to a requested order). Immutable after
// construction; all operations are pure.
//
// Built-in families:
//   uniform          F(x) = x              on [0, 1]
//   power(alpha)     F(x) = x^alpha        on [0, 1]
//   exponential(l)   F(x) = 1 - e^(-l x)   on [0, inf)
//   fat_tail(c)      F(x) = 1 - x^(-c)     on [1, inf)
// plus custom laws given by their quantile function Q(u).
class Distribution {
public:
  static Distribution uniform();
  static Distribution power(double alpha);
  static Distribution exponential(double lambda);
  static Distribution fat_tail(double c);
  static Distribution custom(const std::string& quantile_text);

  // Spec-string grammar used by the CLI and config files:
  //   uniform | power:alpha=<real> | exp:lambda=<real> | fattail:c=<real>
  //   | custom:file=<path>
  static Distribution parse(std::string_view spec);

  DistKind kind() const { return kind_; }
  double param() const { return param_; }
  const Support& support() const { return support_; }

  // Canonical spec string, used to identify the law in reports.
  const std::string& id() const { return id_; }

  double cdf(double x) const;
  double pdf(double x) const;
  double quantile(double u) const;

  // Jet of Q at u: coeff(i) = Q^(i)(u) / i!. Requires u in (0,1) and
  // order <= 12.
  Jet quantile_jet(double u, std::size_t order) const;

private:
  Distribution(DistKind kind, double param, Support support, std::string id)
      : kind_(kind), param_(param), support_(support), id_(std::move(id)) {}

  DistKind kind_;
  double param_;
  Support support_;
  std::string id_;
  std::shared_ptr<const QuantileExpr> program_;
};

// Jet of gamma(u) = Q(u) * u^(n-2), the workhorse of the bid solver.
Jet gamma_jet(const Distribution& d, double u, int n, std::size_t order);

}  // namespace kauction
