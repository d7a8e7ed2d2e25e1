#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rgbethe/detforms.hpp"
#include "rgbethe/errors.hpp"
#include "rgbethe/kernels.hpp"
#include "rgbethe/models.hpp"
#include "rgbethe/oracle.hpp"
#include "rgbethe/solver.hpp"

namespace py = pybind11;
using namespace rgbethe;

namespace {

SolveConfig config_with(double tol, int threads) {
    SolveConfig c;
    c.newton_tol = tol;
    c.threads = threads;
    return c;
}

}  // namespace

PYBIND11_MODULE(_rgbethe, m) {
    m.doc() = "Richardson-Gaudin solvers for XXZ, Dicke and p+ip boson models";

    static py::exception<Error> exc(m, "RGError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyObject* type = exc.ptr();
            py::object inst = py::reinterpret_steal<py::object>(PyObject_CallFunction(type, "s", e.what()));
            inst.attr("code") = error_name(e.code());
            PyErr_SetObject(type, inst.ptr());
        }
    });

    py::enum_<Realization>(m, "Realization")
        .value("Trigonometric", Realization::Trigonometric)
        .value("Hyperbolic", Realization::Hyperbolic);
    py::enum_<ModelVariant>(m, "ModelVariant")
        .value("XXZSpin", ModelVariant::XXZSpin)
        .value("Dicke", ModelVariant::Dicke)
        .value("PipBoson", ModelVariant::PipBoson);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_readonly("variant", &ModelSpec::variant)
        .def_readonly("levels", &ModelSpec::levels)
        .def_readonly("spins", &ModelSpec::spins)
        .def_readonly("coupling", &ModelSpec::coupling)
        .def_readonly("eps0", &ModelSpec::eps0)
        .def_readonly("eta0_sq", &ModelSpec::eta0_sq)
        .def_readonly("kappa", &ModelSpec::kappa)
        .def_readonly("realization", &ModelSpec::realization)
        .def_property_readonly("m", &ModelSpec::m)
        .def("to_json", [](const ModelSpec& s) { return model_to_json(s); })
        .def_static("from_json", [](const std::string& t) { return model_from_json(t).model; });

    m.def("model_dicke", &model_dicke, py::arg("eps0"), py::arg("levels"), py::arg("G"),
          py::arg("spins") = std::vector<double>{});
    m.def("model_pip", &model_pip, py::arg("eta0_sq"), py::arg("kappa"), py::arg("levels"),
          py::arg("spins") = std::vector<double>{});
    m.def("model_xxz", &model_xxz, py::arg("realization"), py::arg("levels"), py::arg("g"),
          py::arg("spins") = std::vector<double>{});
    m.def("sector_dimension", &sector_dimension);

    py::class_<BasisState>(m, "BasisState")
        .def(py::init([](int b, std::vector<int> occ) { return BasisState{b, std::move(occ)}; }),
             py::arg("boson_count"), py::arg("occupations"))
        .def_readonly("boson_count", &BasisState::boson_count)
        .def_readonly("occupations", &BasisState::occupations);

    py::class_<BetheSolution>(m, "BetheSolution")
        .def_readonly("N", &BetheSolution::N)
        .def_readonly("rapidities", &BetheSolution::rapidities)
        .def_readonly("lambdas", &BetheSolution::lambdas)
        .def_readonly("lambda0", &BetheSolution::lambda0)
        .def_readonly("charges", &BetheSolution::charges)
        .def_readonly("residual_rapidity", &BetheSolution::residual_rapidity)
        .def_readonly("residual_lambda", &BetheSolution::residual_lambda)
        .def_readonly("pattern", &BetheSolution::pattern);

    m.def("kernel_X", &kernel_X);
    m.def("kernel_Z", &kernel_Z);

    m.def(
        "enumerate_states",
        [](const ModelSpec& s, int N, double tol, int threads) {
            py::gil_scoped_release nogil;
            return enumerate_states(s, N, config_with(tol, threads));
        },
        py::arg("model"), py::arg("N"), py::arg("tol") = 1e-12, py::arg("threads") = 0);
    m.def(
        "solve_lambdas",
        [](const ModelSpec& s, int N, const std::vector<double>& seed, double tol) {
            return solve_lambdas(s, N, seed, config_with(tol, 0));
        },
        py::arg("model"), py::arg("N"), py::arg("seed"), py::arg("tol") = 1e-12);
    m.def(
        "solve_rapidities",
        [](const ModelSpec& s, int N, const std::vector<cplx>& seed, double tol) {
            return solve_rapidities(s, N, seed, config_with(tol, 0));
        },
        py::arg("model"), py::arg("N"), py::arg("seed"), py::arg("tol") = 1e-12);
    m.def(
        "solve_pattern", [](const ModelSpec& s, const std::vector<int>& c) { return solve_pattern(s, c); },
        py::arg("model"), py::arg("counts"));
    m.def("rapidity_residual", &rapidity_residual);
    m.def("lambda_residual", &lambda_residual);
    m.def("dual_lambdas", py::overload_cast<const ModelSpec&, const std::vector<double>&>(&dual_lambdas));
    m.def("lambda_kappa_derivative", &lambda_kappa_derivative);

    m.def(
        "continuation_xi",
        [](const ModelSpec& s, int N, const std::string& partition, int xi_steps) {
            SolveConfig c;
            c.step.max_step = 1.0 / xi_steps;
            auto start = continuation_start(s, N, parse_partition(partition), c);
            auto p = continuation_xi(s, N, start, c);
            return py::make_tuple(p.xi_samples, p.rapidity_snapshots, p.flagged);
        },
        py::arg("model"), py::arg("N"), py::arg("partition"), py::arg("xi_steps") = 50);

    m.def(
        "overlap",
        [](const ModelSpec& s, const BetheSolution& b, const BasisState& st, double gauge) {
            return overlap(s, b, st, gauge).value;
        },
        py::arg("model"), py::arg("solution"), py::arg("basis"), py::arg("gauge") = 0.0);
    m.def("permanent_expansion", &permanent_expansion);
    m.def("norm", [](const ModelSpec& s, const BetheSolution& b) {
        return (s.variant == ModelVariant::PipBoson ? norm_pip(s, b) : norm_dicke(s, b)).real();
    });
    m.def("ff_raise_pip", [](const ModelSpec& s, const BetheSolution& a, const BetheSolution& b, int k) {
        return ff_raise_pip(s, a, b, k).real();
    });
    m.def("ff_boson_pip", [](const ModelSpec& s, const BetheSolution& a, const BetheSolution& b) {
        return ff_boson_pip(s, a, b).real();
    });
    m.def("ff_number_pip", [](const ModelSpec& s, const BetheSolution& a, const BetheSolution& b) {
        auto f = ff_number_pip(s, a, b);
        return py::make_tuple(f.sz, f.boson);
    });

    // exact diagonalization oracle
    m.def("basis_states", [](const ModelSpec& s, int N) { return build_sector_basis(s, N).states; });
    m.def("ed_charges", [](const ModelSpec& s, int N) {
        auto E = diagonalize(build_sector_basis(s, N));
        return py::make_tuple(E.charges, E.vectors);
    });
}
