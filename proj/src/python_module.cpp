#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pmsval/commands.hpp"
#include "pmsval/errors.hpp"
#include "pmsval/rank.hpp"

namespace py = pybind11;

namespace {

py::tuple run(const std::string& command, const std::string& problem, std::optional<std::size_t> tail_window,
              std::optional<std::size_t> rank, std::optional<std::string> probes, bool want_dot) {
    pmsval::io::json doc;
    try {
        doc = pmsval::io::json::parse(problem);
    } catch (const pmsval::io::json::parse_error& e) {
        throw pmsval::SchemaError(e.what());
    }
    pmsval::CommandOptions opt;
    opt.tail_window = tail_window;
    opt.rank = rank;
    if (probes) opt.probes = pmsval::io::json::parse(*probes);
    opt.want_dot = want_dot;
    const pmsval::CommandResult r = pmsval::run_command(command, doc, opt);
    return py::make_tuple(r.report.dump(), r.exit_code, r.dot);
}

std::string tree_dot(std::size_t n, const std::string& kind) {
    if (kind != "pcs" && kind != "pds") throw pmsval::SchemaError("kind must be \"pcs\" or \"pds\"");
    return pmsval::decision_tree_dot(n, kind == "pcs" ? pmsval::PmsKind::Pcs : pmsval::PmsKind::Pds);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pseudo monotone sequences: classification, v_E and the rank of the extended value group";

    static py::exception<pmsval::Error> base(m, "PmsvalError");
    static py::exception<pmsval::SchemaError> schema(m, "SchemaError", base.ptr());
    static py::exception<pmsval::InvariantError> invariant(m, "InvariantError", base.ptr());
    static py::exception<pmsval::IndeterminateError> indeterminate(m, "IndeterminateError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const pmsval::SchemaError& e) {
            PyErr_SetString(schema.ptr(), e.what());
        } catch (const pmsval::InvariantError& e) {
            PyErr_SetObject(invariant.ptr(), py::make_tuple(e.what(), e.invariant()).ptr());
        } catch (const pmsval::IndeterminateError& e) {
            PyErr_SetString(indeterminate.ptr(), e.what());
        } catch (const std::domain_error& e) {
            PyErr_SetObject(invariant.ptr(), py::make_tuple(e.what(), "domain").ptr());
        }
    });

    m.def("run", &run, py::arg("command"), py::arg("problem"), py::arg("tail_window") = py::none(),
          py::arg("rank") = py::none(), py::arg("probes") = py::none(), py::arg("want_dot") = false,
          "Runs a command on a JSON problem; returns (report_json, exit_code, dot_or_None).");
    m.def("decision_tree_dot", &tree_dot, py::arg("rank"), py::arg("kind") = "pcs");
    m.attr("schema_version") = pmsval::kSchemaVersion;
}
