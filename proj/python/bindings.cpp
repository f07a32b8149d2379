#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "crsegre/cli.hpp"
#include "crsegre/classify.hpp"
#include "crsegre/corpus.hpp"
#include "crsegre/propagate.hpp"
#include "crsegre/segre.hpp"

namespace py = pybind11;
using namespace crsegre;

namespace {

GenericManifold make_manifold(int m, int d, int order,
                              const std::vector<std::string>& theta_bar) {
    Frame fr(m, d, false);
    SeriesVector tb;
    for (const auto& e : theta_bar) tb.push_back(parse_series(e, fr.ambient, order));
    return GenericManifold::from_theta_bar(m, d, order, tb);
}

FormalMap make_map(const GenericManifold& src, const GenericManifold& dst,
                   const std::vector<std::string>& components) {
    SeriesVector g, f;
    for (int j = 0; j < dst.m() + dst.d(); ++j) {
        Series c = parse_series(components.at(static_cast<size_t>(j)), src.frame().t, src.order());
        if (j < dst.m())
            g.push_back(c);
        else
            f.push_back(c);
    }
    return FormalMap(src, dst, g, f);
}

py::dict report_to_dict(const ClassificationReport& rep) {
    py::dict out;
    out["s_solvable"] = rep.solvable.verdict.str();
    if (rep.solvable.verdict.definite_true()) out["kappa0"] = rep.solvable.kappa0;
    out["s_finite"] = rep.finite.verdict.str();
    out["s_nondeg"] = rep.nondeg.verdict.str();
    out["audit"] = rep.audit_ok;
    out["order"] = rep.order_used;
    if (rep.nondeg.verdict.definite_true()) out["witness_det_leading"] = rep.nondeg.det_leading;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "exact Segre-chain geometry and nondegeneracy classification";

    py::register_exception<ParseError>(mod, "InputParseError");
    py::register_exception<PreconditionError>(mod, "PreconditionViolation");
    py::register_exception<SeriesError>(mod, "SeriesArithmeticError");

    py::class_<Series>(mod, "Series")
        .def(py::init([](const std::string& text, const std::vector<std::string>& vars, int order) {
                 return parse_series(text, vars, order);
             }),
             py::arg("text"), py::arg("vars"), py::arg("order"))
        .def_property_readonly("order", &Series::order)
        .def_property_readonly("vars", &Series::vars)
        .def("is_zero", &Series::is_zero)
        .def("__add__", [](const Series& a, const Series& b) { return a + b; })
        .def("__sub__", [](const Series& a, const Series& b) { return a - b; })
        .def("__mul__", [](const Series& a, const Series& b) { return a * b; })
        .def("__neg__", [](const Series& a) { return -a; })
        .def("__eq__", [](const Series& a, const Series& b) { return a == b; })
        .def("derive", py::overload_cast<const std::string&>(&Series::derive, py::const_))
        .def("truncated", &Series::truncated)
        .def("invert_unit", &Series::inverted_unit)
        .def("__repr__", &Series::str)
        .def("__str__", &Series::str);

    py::class_<GenericManifold>(mod, "GenericManifold")
        .def(py::init(&make_manifold), py::arg("m"), py::arg("d"), py::arg("order"),
             py::arg("theta_bar"))
        .def_property_readonly("m", &GenericManifold::m)
        .def_property_readonly("d", &GenericManifold::d)
        .def_property_readonly("order", &GenericManifold::order)
        .def("verify_normal", &GenericManifold::verify_normal)
        .def("theta_bar",
             [](const GenericManifold& M) {
                 std::vector<std::string> out;
                 for (const auto& s : M.theta_bar()) out.push_back(s.str());
                 return out;
             })
        .def("verify_reality", [](const GenericManifold& M) {
            auto [r1, r2] = verify_reality(M);
            int nonzero = 0;
            for (const auto& r : r1) nonzero += r.is_zero() ? 0 : 1;
            for (const auto& r : r2) nonzero += r.is_zero() ? 0 : 1;
            return nonzero == 0;
        });

    py::class_<FormalMap>(mod, "FormalMap")
        .def(py::init(&make_map), py::arg("source"), py::arg("target"), py::arg("components"))
        .def_static("identity", &FormalMap::identity)
        .def("maps_into", [](const FormalMap& h) {
            for (const auto& r : verify_maps_into(h))
                if (!r.is_zero()) return false;
            return true;
        });

    mod.def("theta_from_graph",
            [](int m, int d, const std::vector<std::string>& graph, int order) {
                Frame fr(m, d, false);
                std::vector<std::string> gv = fr.w;
                gv.insert(gv.end(), fr.zeta.begin(), fr.zeta.end());
                gv.insert(gv.end(), fr.z.begin(), fr.z.end());
                SeriesVector h;
                for (const auto& e : graph) h.push_back(parse_series(e, gv, order));
                return theta_from_graph(m, d, h, order);
            },
            py::arg("m"), py::arg("d"), py::arg("graph"), py::arg("order"),
            "Build a manifold from real graph data y = h(w, wbar, x); wbar uses the zeta names "
            "and x the z names.");

    mod.def("segre_type",
            [](const GenericManifold& M, int k_max, std::uint64_t seed) {
                SegreTypeReport rep = segre_multitype(M, k_max, seed);
                py::dict out;
                out["conclusive"] = rep.conclusive;
                out["ranks"] = rep.ranks;
                if (rep.conclusive) {
                    out["mu"] = rep.mu;
                    out["e"] = rep.e;
                    out["minimal"] = rep.minimal;
                }
                return out;
            },
            py::arg("manifold"), py::arg("k_max") = 8, py::arg("seed") = 1);

    mod.def("classify_map",
            [](const FormalMap& h, int kappa_max, int gamma_bound, std::uint64_t seed) {
                return report_to_dict(classify_map(h, Bounds{kappa_max, gamma_bound, 4, seed}));
            },
            py::arg("map"), py::arg("kappa_max") = 6, py::arg("gamma_bound") = 4,
            py::arg("seed") = 1);

    mod.def("classify_manifold",
            [](const GenericManifold& M, int kappa_max, int gamma_bound, std::uint64_t seed) {
                return report_to_dict(manifold_classify(M, Bounds{kappa_max, gamma_bound, 4, seed}));
            },
            py::arg("manifold"), py::arg("kappa_max") = 6, py::arg("gamma_bound") = 4,
            py::arg("seed") = 1);

    mod.def("run_command",
            [](const std::string& command, const std::string& input_text,
               const std::vector<std::string>& names, int order, int kappa_max, int gamma_bound,
               int beta_bound, int k_max, std::uint64_t seed) {
                RunConfig cfg;
                cfg.command = command;
                cfg.names = names;
                cfg.order = order;
                cfg.kappa_max = kappa_max;
                cfg.gamma_bound = gamma_bound;
                cfg.beta_bound = beta_bound;
                cfg.k_max = k_max;
                cfg.seed = seed;
                RunResult res = run_command(cfg, parse_input(input_text));
                return py::make_tuple(res.exit_code, res.report);
            },
            py::arg("command"), py::arg("input_text"), py::arg("names"), py::arg("order") = 8,
            py::arg("kappa_max") = 6, py::arg("gamma_bound") = 4, py::arg("beta_bound") = 4,
            py::arg("k_max") = 4, py::arg("seed") = 1,
            "Dispatch a CLI command against input text; returns (exit_code, report).");

    mod.def("corpus_text", [] {
        Corpus c = build_corpus(8);
        std::ostringstream os;
        for (const auto& [name, M] : c.manifolds) os << serialize_manifold(name, M) << "\n";
        os << serialize_map("embed_a1", "hq", "target_a1", c.maps.at("embed_a1")) << "\n";
        os << serialize_map("embed_a2", "hq", "target_a2", c.maps.at("embed_a2")) << "\n";
        os << serialize_map("embed_quartic", "quartic", "quartic3", c.maps.at("embed_quartic"));
        return os.str();
    });

#ifdef VERSION_INFO
    mod.attr("__version__") = VERSION_INFO;
#else
    mod.attr("__version__") = "0.1.0";
#endif
}
