#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pcurv/scenario.hpp"

namespace py = pybind11;
using namespace pcurv;

namespace {

py::object error_type;

[[noreturn]] void raise(const Error& e) {
    py::object exc = error_type(e.what());
    exc.attr("kind") = e.kind;
    PyErr_SetObject(error_type.ptr(), exc.ptr());
    throw py::error_already_set();
}

}  // namespace

PYBIND11_MODULE(_pcurv, m) {
    m.doc() = "exact arithmetic curvature of p-adic metrics";
    m.attr("__version__") = kVersion;
    m.attr("SCHEMA") = kSchema;
    error_type = py::reinterpret_borrow<py::object>(
        PyErr_NewException("pcurv._pcurv.PcurvError", PyExc_RuntimeError, nullptr));
    m.attr("PcurvError") = error_type;

    m.def("command_catalog", &command_catalog);

    m.def(
        "run_scenario",
        [](const std::string& text, std::optional<int> precision, std::optional<uint64_t> seed,
           std::optional<std::vector<std::string>> commands) {
            try {
                json j;
                try {
                    j = json::parse(text);
                } catch (const json::exception& e) {
                    throw Error("SchemaError", std::string("scenario is not valid JSON: ") + e.what());
                }
                auto s = parse_scenario(j, precision, seed);
                RunResult r;
                {
                    py::gil_scoped_release nogil;
                    r = run(s, commands);
                }
                return py::make_tuple(r.report.dump(), r.ok);
            } catch (const Error& e) {
                raise(e);
            }
        },
        py::arg("text"), py::arg("precision") = py::none(), py::arg("seed") = py::none(),
        py::arg("commands") = py::none());

    m.def(
        "symbol_tables",
        [](int order, std::vector<int> theta, int t1, int t2) {
            try {
                WeilMonoid M(Group::cyclic(order), std::move(theta), 1);
                auto T = symbol_tables(M, Labeling::canonical(order), t1, t2);
                py::dict d;
                d["star"] = T.star;
                d["alpha"] = T.alpha;
                d["ell"] = T.ell;
                d["abelian"] = M.is_abelian();
                return d;
            } catch (const Error& e) {
                raise(e);
            }
        },
        py::arg("order"), py::arg("theta"), py::arg("t1") = 1, py::arg("t2") = 1,
        "symbol tables of the monoid built from a cyclic group and an automorphism");
}
