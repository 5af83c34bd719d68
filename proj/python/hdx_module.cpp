#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "hdx/analyze.hpp"
#include "hdx/complex.hpp"
#include "hdx/contraction.hpp"
#include "hdx/entropy.hpp"
#include "hdx/errors.hpp"
#include "hdx/instance_io.hpp"
#include "hdx/report.hpp"
#include "hdx/spectral.hpp"
#include "hdx/walks.hpp"

namespace py = pybind11;
using namespace hdx;

namespace {

using Tuple = std::vector<Element>;

Face to_face(const Tuple& elements) { return Face(elements); }

Tuple to_tuple(const Face& face) { return Tuple(face.elements().begin(), face.elements().end()); }

OptimizerOptions optimizer(std::size_t restarts, std::uint64_t seed) {
    OptimizerOptions o;
    o.restarts = restarts;
    o.seed = seed;
    return o;
}

py::dict solution_dict(const ContractionSolution& s) {
    py::dict d;
    d["v"] = s.v;
    d["x"] = s.x;
    d["v_closed_form"] = s.v_closed_form;
    d["our_bounds"] = s.our_bounds;
    d["al_bounds"] = s.al_bounds;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weighted simplicial complexes, their random walks, and contraction bounds";

    static py::exception<Error> base(m, "HdxError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(base, (std::string(e.kind()) + ": " + e.what()).c_str());
        }
    });

    py::class_<PureSimplicialComplex>(m, "Complex")
        .def_property_readonly("dimension", &PureSimplicialComplex::dimension)
        .def_property_readonly("ground_set_size", &PureSimplicialComplex::ground_set_size)
        .def("level_size", &PureSimplicialComplex::level_size, py::arg("k"))
        .def("face_counts", &PureSimplicialComplex::face_counts)
        .def(
            "faces",
            [](const PureSimplicialComplex& c, std::size_t k) {
                std::vector<Tuple> out;
                for (const Face& f : c.faces(k)) out.push_back(to_tuple(f));
                return out;
            },
            py::arg("k"), "Faces of cardinality k in state-index order.")
        .def("weights", &PureSimplicialComplex::weights, py::arg("k"))
        .def(
            "weight", [](const PureSimplicialComplex& c, const Tuple& f) { return c.weight(to_face(f)); },
            py::arg("face"))
        .def("to_json", &dump_instance)
        .def("__repr__", [](const PureSimplicialComplex& c) {
            return "<Complex d=" + std::to_string(c.dimension()) + " n=" + std::to_string(c.ground_set_size()) +
                   " top_faces=" + std::to_string(c.level_size(c.dimension())) + ">";
        });

    m.def(
        "from_top_faces",
        [](std::size_t d, const std::vector<Tuple>& faces, std::optional<std::vector<double>> weights) {
            if (weights && weights->size() != faces.size())
                throw DimensionError("weights and faces differ in length");
            std::vector<WeightedFace> top;
            for (std::size_t i = 0; i < faces.size(); ++i)
                top.push_back({to_face(faces[i]), weights ? (*weights)[i] : 1.0});
            return build_from_top_faces(d, std::move(top));
        },
        py::arg("d"), py::arg("faces"), py::arg("weights") = py::none());
    m.def("parse", [](const std::string& text) { return parse_instance(text, "<python>"); }, py::arg("text"));
    m.def("load", [](const std::string& path) { return load_instance(path); }, py::arg("path"));
    m.def("generate", [](const std::string& spec) { return generate_instance(spec); }, py::arg("spec"),
          "Generator spec such as 'complete:n=6,d=4' or 'random:n=8,d=3,density=0.5,seed=7'.");
    m.def("complete", [](std::size_t n, std::size_t d) { return generate_complete_complex(n, d); }, py::arg("n"),
          py::arg("d"));
    m.def(
        "matroid",
        [](const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
            return generate_graphic_matroid_bases(edges);
        },
        py::arg("edges"));
    m.def(
        "random_complex",
        [](std::size_t n, std::size_t d, double density, std::uint64_t seed) {
            return generate_random_complex(n, d, density, seed);
        },
        py::arg("n"), py::arg("d"), py::arg("density") = 0.5, py::arg("seed") = 0);
    m.def(
        "link", [](const PureSimplicialComplex& c, const Tuple& base) { return link(c, to_face(base)).complex; },
        py::arg("complex"), py::arg("base"), "The link of `base`, as a complex on the original ground set.");
    m.def(
        "level_distribution",
        [](const PureSimplicialComplex& c, std::size_t k) { return level_distribution(c, k).probabilities; },
        py::arg("complex"), py::arg("k"));

    py::class_<WalkOperator>(m, "Walk")
        .def_readonly("source_level", &WalkOperator::source_level)
        .def_readonly("target_level", &WalkOperator::target_level)
        .def_readonly("matrix", &WalkOperator::matrix)
        .def_readonly("stationary", &WalkOperator::stationary);

    m.def("up_step", &up_step, py::arg("complex"), py::arg("k"));
    m.def("down_step", &down_step, py::arg("complex"), py::arg("k"));
    m.def("down_up", &down_up, py::arg("complex"), py::arg("k"));
    m.def("up_down", &up_down, py::arg("complex"), py::arg("k"));
    m.def(
        "local_walk", [](const PureSimplicialComplex& c, const Tuple& base) { return local_walk(c, to_face(base)); },
        py::arg("complex"), py::arg("base"));
    m.def(
        "spectrum", [](const WalkOperator& p) { return walk_spectrum(p).eigenvalues; }, py::arg("walk"),
        "Eigenvalues of a reversible walk, in descending order.");
    m.def("second_eigenvalue", &second_eigenvalue, py::arg("walk"));
    m.def(
        "dirichlet_form",
        [](const WalkOperator& p, const Eigen::VectorXd& f, const Eigen::VectorXd& g) { return dirichlet_form(p, f, g); },
        py::arg("walk"), py::arg("f"), py::arg("g"));

    m.def(
        "spectral_profile",
        [](const PureSimplicialComplex& c) { return measure_spectral_profile(c).profile.values; },
        py::arg("complex"), "a_0..a_{d-2}: worst second eigenvalue of local walks per level.");
    m.def(
        "trickling_down",
        [](const PureSimplicialComplex& c, std::size_t k) {
            const TricklingDownResult r = trickling_down_check(c, k);
            py::dict d;
            d["gamma"] = r.gamma_raw;
            d["bound"] = r.bound_raw;
            std::vector<std::pair<Tuple, double>> rows;
            for (const TricklingRow& row : r.rows) rows.emplace_back(to_tuple(row.face), row.lambda2);
            d["rows"] = rows;
            d["holds"] = r.holds();
            return d;
        },
        py::arg("complex"), py::arg("k") = 1);
    m.def(
        "trickling_down_propagate",
        [](double gamma, std::size_t d) { return trickling_down_propagate(gamma, d).values; }, py::arg("gamma"),
        py::arg("d"));

    m.def(
        "solve_profile", [](const std::vector<double>& a) { return solution_dict(solve_profile(SpectralProfile{a})); },
        py::arg("profile"));
    m.def(
        "our_bound",
        [](const std::vector<double>& a, std::size_t k) {
            return our_bound(factors_from_profile(SpectralProfile{a}), k);
        },
        py::arg("profile"), py::arg("k"));
    m.def(
        "al_bound", [](const std::vector<double>& a, std::size_t k) { return al_bound(SpectralProfile{a}, k); },
        py::arg("profile"), py::arg("k"));
    m.def("trickling_profile_bound", &trickling_profile_bound, py::arg("gamma"), py::arg("d"), py::arg("k"));
    m.def(
        "is_admissible", [](const std::vector<double>& a) { return is_admissible(SpectralProfile{a}).admissible; },
        py::arg("profile"));

    m.def(
        "relative_entropy",
        [](const Eigen::VectorXd& pi, const Eigen::VectorXd& f) { return relative_entropy(pi, f); },
        py::arg("pi"), py::arg("f"));
    m.def("entropy_dirichlet", &entropy_dirichlet, py::arg("walk"), py::arg("f"));
    m.def(
        "estimate_mlsi",
        [](const WalkOperator& p, std::size_t restarts, std::uint64_t seed) {
            return estimate_mlsi(p, optimizer(restarts, seed)).value;
        },
        py::arg("walk"), py::arg("restarts") = 64, py::arg("seed") = 42,
        "Upper estimate of the modified log-Sobolev constant.");
    m.def(
        "verify_main_ent",
        [](const PureSimplicialComplex& c, std::size_t k, std::size_t restarts, std::uint64_t seed) {
            const MainEntReport r = verify_main_ent(c, k, optimizer(restarts, seed));
            py::dict d;
            d["k"] = r.k;
            d["v_hat"] = r.v_hat;
            d["global_estimate"] = r.global_estimate;
            d["margin"] = r.margin;
            d["mlsi_estimate"] = r.mlsi_estimate;
            d["mlsi_bound"] = r.mlsi_bound;
            d["skipped"] = r.skipped;
            return d;
        },
        py::arg("complex"), py::arg("k"), py::arg("restarts") = 64, py::arg("seed") = 42);

    m.def(
        "analyze",
        [](const PureSimplicialComplex& c, const std::string& checks, std::uint64_t seed, std::size_t functions,
           std::size_t restarts, bool timing) {
            AnalyzeOptions o;
            o.suites = parse_suites(checks);
            o.seed = seed;
            o.functions = functions;
            o.optimizer = optimizer(restarts, seed);
            VerificationReport r;
            {
                py::gil_scoped_release release;
                r = run_analyze(c, "python", o);
            }
            return to_json(r, timing).dump();
        },
        py::arg("complex"), py::arg("checks") = "all", py::arg("seed") = 42, py::arg("functions") = 1000,
        py::arg("restarts") = 64, py::arg("timing") = true, "Runs the verification suites; returns the JSON report.");
}
