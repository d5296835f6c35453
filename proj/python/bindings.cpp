#include "closedecon/ccg.hpp"
#include "closedecon/cli.hpp"
#include "closedecon/equilibrium.hpp"
#include "closedecon/io.hpp"
#include "closedecon/production.hpp"
#include "closedecon/tatonnement.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace closedecon;

PYBIND11_MODULE(_closedecon, m) {
    m.doc() = "Closed-economy equilibrium engine";

    py::register_exception<Error>(m, "ClosedEconError");

    py::class_<Economy>(m, "Economy")
        .def(py::init([](const Vec& supply, const Mat& technology, const Mat& utility, const Mat& true_utility) {
                 Economy e;
                 e.supply = supply;
                 e.technology = technology;
                 e.utility = utility;
                 e.true_utility = true_utility;
                 return validate_economy(e);
             }),
             py::arg("supply"), py::arg("technology"), py::arg("utility"), py::arg("true_utility") = Mat())
        .def_readonly("class_names", &Economy::class_names)
        .def_readonly("good_names", &Economy::good_names)
        .def_readonly("supply", &Economy::supply)
        .def_readonly("technology", &Economy::technology)
        .def_readonly("utility", &Economy::utility)
        .def_readonly("true_utility", &Economy::true_utility)
        .def_property_readonly("m", &Economy::m)
        .def_property_readonly("n", &Economy::n);

    py::class_<EquilibriumPoint>(m, "EquilibriumPoint")
        .def(py::init(&make_point), py::arg("prices"), py::arg("quantities"), py::arg("wages"), py::arg("allocation"))
        .def_readonly("prices", &EquilibriumPoint::prices)
        .def_readonly("quantities", &EquilibriumPoint::quantities)
        .def_readonly("wages", &EquilibriumPoint::wages)
        .def_readonly("allocation", &EquilibriumPoint::allocation)
        .def_readonly("bang_per_buck", &EquilibriumPoint::bang_per_buck);

    py::class_<CombinatorialData>(m, "CombinatorialData")
        .def_readonly("active_classes", &CombinatorialData::active_classes)
        .def_readonly("active_goods", &CombinatorialData::active_goods)
        .def_readonly("forest", &CombinatorialData::forest)
        .def_readonly("components", &CombinatorialData::components)
        .def_readonly("tight_zero_edges", &CombinatorialData::tight_zero_edges)
        .def("canonical", &CombinatorialData::canonical)
        .def("__repr__", &CombinatorialData::canonical);

    py::class_<ParametricFamily>(m, "ParametricFamily")
        .def_readonly("base", &ParametricFamily::base)
        .def_property_readonly("parameter_names",
                               [](const ParametricFamily& f) {
                                   std::vector<std::string> names;
                                   for (const auto& p : f.params) names.push_back(p.name);
                                   return names;
                               })
        .def("instantiate", &ParametricFamily::instantiate);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("found", &SolveResult::found)
        .def_readonly("point", &SolveResult::point)
        .def_readonly("method", &SolveResult::method)
        .def_readonly("multiplicity", &SolveResult::multiplicity)
        .def_readonly("data", &SolveResult::data)
        .def_readonly("cycle", &SolveResult::cycle)
        .def_readonly("generic", &SolveResult::generic)
        .def_property_readonly("label", [](const SolveResult& r) { return zone_label(r); });

    py::class_<TatonnementTrace>(m, "TatonnementTrace")
        .def_property_readonly("status", [](const TatonnementTrace& t) { return std::string(to_string(t.status)); })
        .def_readonly("converged_step", &TatonnementTrace::converged_step)
        .def_readonly("cycle_period", &TatonnementTrace::cycle_period)
        .def_property_readonly("points", [](const TatonnementTrace& t) {
            std::vector<EquilibriumPoint> pts;
            for (const auto& s : t.states) pts.push_back(s.point);
            return pts;
        });

    py::class_<GameTable>(m, "GameTable")
        .def_readonly("names", &GameTable::names)
        .def_readonly("grids", &GameTable::grids)
        .def_readonly("payoffs", &GameTable::payoffs)
        .def_readonly("solved", &GameTable::solved)
        .def_readonly("labels", &GameTable::labels)
        .def("unravel", &GameTable::unravel);

    py::class_<TwoByTwoResult>(m, "TwoByTwoResult")
        .def_readonly("forest", &TwoByTwoResult::forest)
        .def_readonly("price_ratio", &TwoByTwoResult::price_ratio)
        .def_readonly("money_shares", &TwoByTwoResult::money_shares)
        .def_readonly("payoffs", &TwoByTwoResult::payoffs)
        .def_readonly("closed_form", &TwoByTwoResult::closed_form);

    auto conv = [](const std::string& s) { return parse_convention(s); };

    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("parse_scenario", &parse_scenario, py::arg("text"));
    m.def("load_point", &load_point, py::arg("path"));
    m.def("load_forest", &load_forest, py::arg("path"));
    m.def(
        "solve",
        [](const Economy& e, double tol, const std::string& normalization) {
            SolveOptions o;
            o.verify_tol = tol;
            o.normalization = Normalization::parse(normalization);
            return solve_equilibrium(e, o);
        },
        py::arg("economy"), py::arg("tol") = 1e-7, py::arg("normalization") = "revenue");
    m.def("verify", [](const Economy& e, const EquilibriumPoint& p, double tol) { return verify_sm(e, p, tol).ok(); },
          py::arg("economy"), py::arg("point"), py::arg("tol") = 1e-7);
    m.def("extract_combinatorics",
          py::overload_cast<const Economy&, const EquilibriumPoint&, double>(&extract_combinatorics),
          py::arg("economy"), py::arg("point"), py::arg("tol") = kActivity);
    m.def(
        "reconstruct",
        [](const Economy& e, const CombinatorialData& d) -> py::object {
            const auto r = reconstruct_from_forest(e, d);
            if (r.status != ReconstructStatus::Feasible) return py::none();
            return py::cast(r.point);
        },
        py::arg("economy"), py::arg("forest"));
    m.def(
        "tatonnement",
        [](const Economy& e, const Vec& p0, int max_iters) {
            TatonnementOptions o;
            o.max_iters = max_iters;
            return run_tatonnement(e, p0, o);
        },
        py::arg("economy"), py::arg("p0"), py::arg("max_iters") = 1000);
    m.def(
        "payoff", [conv](const Economy& e, const EquilibriumPoint& p, const std::string& c) { return payoff(e, p, conv(c)); },
        py::arg("economy"), py::arg("point"), py::arg("convention") = "per-capita");
    m.def(
        "sweep",
        [conv](const ParametricFamily& f, const std::vector<std::vector<double>>& grids, const std::string& c) {
            return sweep(f, grids, conv(c));
        },
        py::arg("family"), py::arg("grids"), py::arg("convention") = "per-capita");
    m.def("pure_nash", &pure_nash, py::arg("table"));
    m.def("classify_2x2", [](const Economy& e, double a, double b) { return classify_2x2(e, a, b); }, py::arg("economy"),
          py::arg("alpha"), py::arg("beta"));
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_command(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
