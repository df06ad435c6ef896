#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fsmsynth/codegen.hpp"
#include "fsmsynth/ltl.hpp"
#include "fsmsynth/machine.hpp"
#include "fsmsynth/mc.hpp"
#include "fsmsynth/scenario.hpp"
#include "fsmsynth/synth.hpp"

namespace py = pybind11;
using namespace fsmsynth;

namespace {

// Value wrapper: FormulaPtr aliases shared_ptr<const Formula>, which is not
// a pybind11 holder type.
struct PyFormula {
  FormulaPtr ptr;
};

SynthesisResult synthesize_text(const std::string& spec_text, const std::string& scenario_text,
                                int min_size, int max_size, int max_iterations,
                                bool scenario_closed, const std::string& solver) {
  LtlFile spec = load_ltl_file(spec_text);
  ScenarioFile scn = load_scn_file(scenario_text, spec.alphabet);
  SynthesisConfig config;
  config.min_size = min_size;
  config.max_size = max_size;
  config.max_cegis_iterations = max_iterations;
  config.scenario_closed = scenario_closed;
  config.solver = SolverConfig::parse(solver);
  return synthesize(spec.formulas, scn.scenarios, spec.alphabet, config);
}

}  // namespace

PYBIND11_MODULE(_fsmsynth, m) {
  m.doc() = "Guarded-FSM synthesis from LTL and scenarios, model checking, codegen";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<Alphabet>(m, "Alphabet")
      .def(py::init([](std::vector<std::string> events, std::vector<std::string> actions,
                       std::vector<std::string> guards) {
             return Alphabet::make(std::move(events), std::move(actions), std::move(guards));
           }),
           py::arg("events"), py::arg("actions") = std::vector<std::string>{},
           py::arg("guards") = std::vector<std::string>{})
      .def_property_readonly("events", &Alphabet::events)
      .def_property_readonly("actions", &Alphabet::actions)
      .def_property_readonly("guards", &Alphabet::guards)
      .def("implicit_action",
           [](const Alphabet& a, const std::string& event) { return a.implicit_action(event); })
      .def("__eq__", [](const Alphabet& a, const Alphabet& b) { return a == b; });

  py::class_<PyFormula>(m, "Formula")
      .def("__str__", [](const PyFormula& f) { return to_string(f.ptr); })
      .def("__repr__", [](const PyFormula& f) { return "Formula(" + to_string(f.ptr) + ")"; })
      .def("to_nnf", [](const PyFormula& f) { return PyFormula{to_nnf(f.ptr)}; })
      .def("atoms", [](const PyFormula& f) { return atoms_of(f.ptr); })
      .def(
          "eval",
          [](const PyFormula& f, const std::vector<std::set<std::string>>& prefix,
             const std::vector<std::set<std::string>>& loop) {
            return eval_on_lasso(f.ptr, Lasso{prefix, loop});
          },
          py::arg("prefix"), py::arg("loop"));

  m.def(
      "parse_ltl",
      [](const std::string& text, const Alphabet& alphabet) {
        return PyFormula{parse_ltl(text, alphabet)};
      },
      py::arg("text"), py::arg("alphabet"));
  m.def("load_ltl", [](const std::string& text) {
    LtlFile f = load_ltl_file(text);
    py::list formulas;
    for (const auto& ptr : f.formulas) formulas.append(PyFormula{ptr});
    return py::make_tuple(f.alphabet, formulas, f.sources);
  });

  py::class_<ScenarioStep>(m, "ScenarioStep")
      .def_readonly("event", &ScenarioStep::event)
      .def_property_readonly("guard", [](const ScenarioStep& s) { return s.guard.str(); })
      .def_readonly("actions", &ScenarioStep::actions);

  py::class_<Scenario>(m, "Scenario").def_readonly("steps", &Scenario::steps);

  m.def("parse_scenarios", &parse_scenarios, py::arg("text"), py::arg("alphabet"));

  py::class_<Fsm>(m, "Fsm")
      .def_readonly("size", &Fsm::size)
      .def_readonly("initial", &Fsm::initial)
      .def_readonly("alphabet", &Fsm::alphabet)
      .def_property_readonly("transitions",
                             [](const Fsm& m_) {
                               py::list out;
                               for (const Transition& t : sorted_transitions(m_))
                                 out.append(py::make_tuple(t.source, t.event, t.guard.str(),
                                                           t.actions, t.target));
                               return out;
                             })
      .def("to_json", [](const Fsm& m_) { return to_json(m_); })
      .def("to_dot", [](const Fsm& m_) { return export_dot(m_); })
      .def("__eq__", [](const Fsm& a, const Fsm& b) { return a == b; });

  m.def("fsm_from_json", [](const std::string& text) { return from_json(text); });
  m.def("validate_fsm", &validate_fsm);

  py::class_<ConformanceResult>(m, "ConformanceResult")
      .def_property_readonly("conforms", &ConformanceResult::conforms)
      .def_readonly("step", &ConformanceResult::step)
      .def("__repr__", [](const ConformanceResult& r) { return r.describe(); });

  m.def("run_scenario", &run_scenario, py::arg("fsm"), py::arg("scenario"));

  py::class_<Verdict>(m, "Verdict")
      .def_readonly("holds", &Verdict::holds)
      .def_property_readonly("prefix", [](const Verdict& v) { return v.counterexample.prefix; })
      .def_property_readonly("loop", [](const Verdict& v) { return v.counterexample.loop; })
      .def("__bool__", [](const Verdict& v) { return v.holds; })
      .def("__repr__", [](const Verdict& v) {
        return std::string(v.holds ? "Verdict(HOLDS)" : "Verdict(VIOLATED)");
      });

  m.def(
      "check", [](const Fsm& m_, const PyFormula& f) { return check(m_, f.ptr); },
      py::arg("fsm"), py::arg("formula"));

  py::class_<SynthesisResult>(m, "SynthesisResult")
      .def_property_readonly(
          "ok",
          [](const SynthesisResult& r) { return r.outcome == SynthesisResult::Outcome::Ok; })
      .def_property_readonly("outcome",
                             [](const SynthesisResult& r) {
                               switch (r.outcome) {
                                 case SynthesisResult::Outcome::Ok: return "ok";
                                 case SynthesisResult::Outcome::Unrealizable:
                                   return "unrealizable";
                                 case SynthesisResult::Outcome::BudgetExceeded:
                                   return "budget-exceeded";
                               }
                               return "error";
                             })
      .def_property_readonly("machine",
                             [](const SynthesisResult& r) -> py::object {
                               if (!r.machine) return py::none();
                               return py::cast(*r.machine);
                             })
      .def_readonly("size", &SynthesisResult::size)
      .def_readonly("iterations", &SynthesisResult::iterations)
      .def_readonly("variables", &SynthesisResult::variables)
      .def_readonly("clauses", &SynthesisResult::clauses)
      .def_readonly("total_seconds", &SynthesisResult::total_seconds);

  m.def("synthesize", &synthesize_text, py::arg("spec"), py::arg("scenarios"),
        py::arg("min_size") = 1, py::arg("max_size") = 8, py::arg("max_iterations") = 10000,
        py::arg("scenario_closed") = false, py::arg("solver") = "internal");

  m.def("generate_contract", [](const Fsm& m_, const std::string& cdef_text) {
    GeneratedContract contract = generate_contract(m_, parse_contract_def(cdef_text));
    py::dict manifest;
    for (const auto& [method, branches] : contract.manifest) {
      py::list list;
      for (const auto& b : branches)
        list.append(py::make_tuple(b.source, b.guard.str(), b.actions, b.target));
      manifest[py::str(method)] = list;
    }
    return py::make_tuple(contract.source, manifest);
  });
}
