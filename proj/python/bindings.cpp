#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <tuple>
#include <vector>

#include "kauction/distribution.hpp"
#include "kauction/equilibrium.hpp"
#include "kauction/simulate.hpp"
#include "kauction/verify.hpp"

namespace py = pybind11;

namespace {

kauction::SimConfig make_sim_config(const kauction::AuctionSpec& spec,
                                    const kauction::Distribution& dist, std::int64_t num_auctions,
                                    std::uint64_t seed) {
  kauction::SimConfig cfg;
  cfg.spec = spec;
  cfg.dist = dist;
  cfg.num_auctions = num_auctions;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Equilibrium bids for kth-price sealed-bid auctions";

  py::class_<kauction::AuctionSpec>(m, "AuctionSpec")
      .def(py::init([](int n, int k) {
             kauction::AuctionSpec spec{n, k};
             spec.validate();
             return spec;
           }),
           py::arg("n"), py::arg("k"))
      .def_readonly("n", &kauction::AuctionSpec::n)
      .def_readonly("k", &kauction::AuctionSpec::k)
      .def("__repr__", [](const kauction::AuctionSpec& s) {
        return "AuctionSpec(n=" + std::to_string(s.n) + ", k=" + std::to_string(s.k) + ")";
      });

  py::class_<kauction::Distribution>(m, "Distribution")
      .def_static("uniform", &kauction::Distribution::uniform)
      .def_static("power", &kauction::Distribution::power, py::arg("alpha"))
      .def_static("exponential", &kauction::Distribution::exponential, py::arg("lam"))
      .def_static("fat_tail", &kauction::Distribution::fat_tail, py::arg("c"))
      .def_static("custom", &kauction::Distribution::custom, py::arg("quantile_text"))
      .def_static(
          "parse", [](const std::string& spec) { return kauction::Distribution::parse(spec); },
          py::arg("spec"))
      .def("cdf", &kauction::Distribution::cdf, py::arg("x"))
      .def("pdf", &kauction::Distribution::pdf, py::arg("x"))
      .def("quantile", &kauction::Distribution::quantile, py::arg("u"))
      .def(
          "quantile_derivatives",
          [](const kauction::Distribution& d, double u, int order) {
            if (order < 0) throw std::invalid_argument("order must be >= 0");
            const kauction::Jet jet = d.quantile_jet(u, static_cast<std::size_t>(order));
            std::vector<double> out;
            out.reserve(static_cast<std::size_t>(order) + 1);
            for (int i = 0; i <= order; ++i)
              out.push_back(jet.derivative(static_cast<std::size_t>(i)));
            return out;
          },
          py::arg("u"), py::arg("order"),
          "Q(u), Q'(u), ..., Q^(order)(u) via jet arithmetic")
      .def_property_readonly("id", [](const kauction::Distribution& d) { return d.id(); })
      .def("__repr__",
           [](const kauction::Distribution& d) { return "Distribution('" + d.id() + "')"; });

  m.def(
      "default_grid", [](std::size_t size) { return kauction::default_grid(size); },
      py::arg("size") = 101);

  m.def("bid", &kauction::bid_generic, py::arg("spec"), py::arg("dist"), py::arg("u"),
        "Equilibrium bid at quantile u");
  m.def("bid_asymptotic", &kauction::bid_asymptotic, py::arg("spec"), py::arg("dist"),
        py::arg("u"), "Large-n approximation x + (k-2)/(n-k+1) * F/f");
  m.def(
      "bid_curve",
      [](const kauction::AuctionSpec& spec, const kauction::Distribution& dist,
         const std::vector<double>& grid) {
        const kauction::BidCurve curve = kauction::bid_curve(spec, dist, grid);
        std::vector<std::tuple<double, double, double>> rows;
        rows.reserve(curve.points.size());
        for (const auto& p : curve.points) rows.emplace_back(p.u, p.x, p.beta);
        return rows;
      },
      py::arg("spec"), py::arg("dist"), py::arg("grid"), "List of (u, x, beta) rows");

  m.def(
      "full_report_json",
      [](const kauction::AuctionSpec& spec, const kauction::Distribution& dist,
         std::size_t grid_size) {
        const auto grid = kauction::default_grid(grid_size);
        return kauction::report_to_json(kauction::full_report(spec, dist, grid)).dump();
      },
      py::arg("spec"), py::arg("dist"), py::arg("grid_size") = 101);

  m.def(
      "estimate_revenue",
      [](const kauction::AuctionSpec& spec, const kauction::Distribution& dist,
         std::int64_t num_auctions, std::uint64_t seed) {
        return kauction::estimate_revenue(make_sim_config(spec, dist, num_auctions, seed));
      },
      py::arg("spec"), py::arg("dist"), py::arg("num_auctions"), py::arg("seed"),
      "(mean kth-highest equilibrium bid, standard error)");

  m.def(
      "best_response_json",
      [](const kauction::AuctionSpec& spec, const kauction::Distribution& dist, double x0,
         const std::vector<double>& deviation_grid, std::int64_t num_auctions,
         std::uint64_t seed) {
        kauction::SimConfig cfg = make_sim_config(spec, dist, num_auctions, seed);
        cfg.x0 = x0;
        cfg.deviation_grid = deviation_grid;
        return kauction::report_to_json(kauction::best_response_scan(cfg)).dump();
      },
      py::arg("spec"), py::arg("dist"), py::arg("x0"), py::arg("deviation_grid"),
      py::arg("num_auctions"), py::arg("seed"));
}
