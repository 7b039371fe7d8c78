// Python bindings for the main operations: translate, run, diff.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "c2m/equiv.hpp"
#include "c2m/msvl_interp.hpp"
#include "c2m/translator.hpp"
#include "c2m/xdc_frontend.hpp"
#include "c2m/xdc_interp.hpp"

namespace py = pybind11;

namespace {

std::vector<std::string> render_diags(const c2m::DiagnosticSink& sink) {
  std::vector<std::string> out;
  for (const auto& d : sink.diags) out.push_back(d.render());
  return out;
}

py::dict translate(const std::string& src, bool canonical) {
  c2m::DiagnosticSink sink;
  auto text = c2m::translate_source(src, "<memory>", sink, canonical);
  py::dict d;
  d["ok"] = text.has_value();
  d["translated"] = text.value_or("");
  d["diagnostics"] = render_diags(sink);
  return d;
}

py::dict run_c(const std::string& src, int64_t fuel,
               const std::string& externs_json) {
  c2m::DiagnosticSink sink;
  auto prog = c2m::xdc::analyze(src, "<memory>", sink);
  py::dict d;
  if (!prog) {
    d["status"] = "rejected";
    d["diagnostics"] = render_diags(sink);
    return d;
  }
  auto rr = c2m::xdc::Interpreter(*prog, c2m::ExternEnv::from_json(externs_json),
                                  fuel)
                .run();
  switch (rr.k) {
    case c2m::xdc::RunResult::K::Exit: d["status"] = "exit"; break;
    case c2m::xdc::RunResult::K::Timeout: d["status"] = "timeout"; break;
    default: d["status"] = "error"; break;
  }
  d["exit_code"] = rr.exit_code;
  d["error"] = rr.error;
  py::dict state;
  for (const auto& c : rr.snapshot) state[py::str(c.path)] = c.value.show();
  d["state"] = state;
  std::vector<std::string> trace;
  for (const auto& e : rr.trace) trace.push_back(e.render());
  d["trace"] = trace;
  return d;
}

py::dict run_m(const std::string& src, int64_t fuel,
               const std::string& externs_json) {
  c2m::DiagnosticSink sink;
  auto prog = c2m::msvl::parse_msvl(src, "<memory>", sink);
  py::dict d;
  if (!prog) {
    d["status"] = "rejected";
    d["diagnostics"] = render_diags(sink);
    return d;
  }
  auto rr = c2m::msvl::Interpreter(
                *prog, c2m::ExternEnv::from_json(externs_json), fuel)
                .run();
  switch (rr.k) {
    case c2m::msvl::RunResult::K::Terminated: d["status"] = "exit"; break;
    case c2m::msvl::RunResult::K::Timeout: d["status"] = "timeout"; break;
    case c2m::msvl::RunResult::K::Infeasible: d["status"] = "infeasible"; break;
    default: d["status"] = "error"; break;
  }
  d["exit_code"] = rr.exit_code;
  d["error"] = rr.error;
  py::dict state;
  for (const auto& c : rr.snapshot) state[py::str(c.path)] = c.value.show();
  d["state"] = state;
  std::vector<std::string> trace;
  for (const auto& e : rr.trace) trace.push_back(e.render());
  d["trace"] = trace;
  return d;
}

py::dict diff(const std::string& src, int64_t fuel,
              const std::string& externs_json) {
  c2m::DiagnosticSink sink;
  std::string translated;
  auto v = c2m::differential_run(src, "<memory>", externs_json, fuel,
                                 &translated, &sink);
  py::dict d;
  switch (v.k) {
    case c2m::EquivVerdict::K::Equivalent: d["verdict"] = "equivalent"; break;
    case c2m::EquivVerdict::K::Mismatch: d["verdict"] = "mismatch"; break;
    case c2m::EquivVerdict::K::BothTimeout: d["verdict"] = "both-timeout"; break;
    case c2m::EquivVerdict::K::VerdictMismatch:
      d["verdict"] = "verdict-mismatch";
      break;
  }
  d["ok"] = v.ok();
  d["witness"] = v.witness;
  d["translated"] = translated;
  d["diagnostics"] = render_diags(sink);
  return d;
}

}  // namespace

PYBIND11_MODULE(_c2m, m) {
  m.doc() = "C-subset to temporal-logic translator with differential checking";
  m.def("translate", &translate, py::arg("source"), py::arg("canonical") = true,
        "Translate a C program; returns {ok, translated, diagnostics}.");
  m.def("run_c", &run_c, py::arg("source"), py::arg("fuel") = 1000000,
        py::arg("externs") = "{}",
        "Run a C program; returns status, exit_code, state, trace.");
  m.def("run_m", &run_m, py::arg("source"), py::arg("fuel") = 1000000,
        py::arg("externs") = "{}",
        "Run a translated program; returns status, exit_code, state, trace.");
  m.def("diff", &diff, py::arg("source"), py::arg("fuel") = 1000000,
        py::arg("externs") = "{}",
        "Translate and run both sides; returns the comparison verdict.");
}
