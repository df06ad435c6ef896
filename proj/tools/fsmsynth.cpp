#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsmsynth/codegen.hpp"
#include "fsmsynth/ltl.hpp"
#include "fsmsynth/machine.hpp"
#include "fsmsynth/mc.hpp"
#include "fsmsynth/scenario.hpp"
#include "fsmsynth/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainFailure = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string outcome_name(fsmsynth::SynthesisResult::Outcome outcome) {
  using Outcome = fsmsynth::SynthesisResult::Outcome;
  switch (outcome) {
    case Outcome::Ok: return "ok";
    case Outcome::Unrealizable: return "unrealizable";
    case Outcome::BudgetExceeded: return "budget-exceeded";
  }
  return "error";
}

void write_report(const std::string& path, const std::string& outcome,
                  const fsmsynth::SynthesisResult* result) {
  nlohmann::ordered_json report;
  report["outcome"] = outcome;
  if (result) {
    report["size"] = result->size;
    report["iterations"] = result->iterations;
    report["variables"] = result->variables;
    report["clauses"] = result->clauses;
    report["timings_ms"] = {{"encode", result->encode_seconds * 1e3},
                            {"solve", result->solve_seconds * 1e3},
                            {"check", result->check_seconds * 1e3},
                            {"total", result->total_seconds * 1e3}};
  }
  write_file(path, report.dump(2) + "\n");
}

struct SynthArgs {
  std::string spec_path, scenarios_path, out_path, dot_path, report_path;
  std::string solver = "internal";
  int min_size = 1;
  int max_size = 8;
  int max_iterations = 10000;
  bool scenario_closed = false;
};

int run_synth(const SynthArgs& args) {
  std::optional<fsmsynth::SynthesisResult> result;
  try {
    fsmsynth::LtlFile spec = fsmsynth::load_ltl_file(read_file(args.spec_path));
    fsmsynth::ScenarioFile scn =
        fsmsynth::load_scn_file(read_file(args.scenarios_path), spec.alphabet);

    fsmsynth::SynthesisConfig config;
    config.min_size = args.min_size;
    config.max_size = args.max_size;
    config.max_cegis_iterations = args.max_iterations;
    config.solver = fsmsynth::SolverConfig::parse(args.solver);
    config.scenario_closed = args.scenario_closed;

    result = fsmsynth::synthesize(spec.formulas, scn.scenarios, spec.alphabet, config);

    if (!args.report_path.empty())
      write_report(args.report_path, outcome_name(result->outcome), &*result);

    if (result->outcome != fsmsynth::SynthesisResult::Outcome::Ok) {
      std::cerr << "synthesis failed: " << outcome_name(result->outcome)
                << " (sizes up to " << result->size << ", " << result->iterations
                << " candidates)\n";
      return kExitDomainFailure;
    }

    write_file(args.out_path, fsmsynth::to_json(*result->machine));
    if (!args.dot_path.empty()) write_file(args.dot_path, fsmsynth::export_dot(*result->machine));

    std::cout << "size=" << result->size << " iterations=" << result->iterations
              << " variables=" << result->variables << " clauses=" << result->clauses
              << " time=" << result->total_seconds << "s\n";
    return kExitOk;
  } catch (const std::exception& e) {
    if (!args.report_path.empty() && !result) write_report(args.report_path, "error", nullptr);
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run_check(const std::string& fsm_path, const std::string& spec_path) {
  try {
    fsmsynth::Fsm m = fsmsynth::from_json(read_file(fsm_path));
    auto violations = fsmsynth::validate_fsm(m);
    if (!violations.empty()) throw std::runtime_error("invalid machine: " + violations.front());

    fsmsynth::LtlFile spec = fsmsynth::load_ltl_file(read_file(spec_path));
    if (!(spec.alphabet == m.alphabet))
      throw std::runtime_error("spec alphabet differs from the machine's");

    fsmsynth::KripkeStructure k = fsmsynth::build_kripke(m);
    bool all_hold = true;
    for (std::size_t i = 0; i < spec.formulas.size(); ++i) {
      fsmsynth::Verdict verdict = fsmsynth::check_kripke(k, spec.formulas[i]);
      if (verdict.holds) {
        std::cout << "HOLDS " << spec.sources[i] << '\n';
        continue;
      }
      all_hold = false;
      std::cout << "VIOLATED " << spec.sources[i] << " | prefix:";
      for (int n : verdict.counterexample.prefix) std::cout << ' ' << k.node_name(n);
      std::cout << " | loop:";
      for (int n : verdict.counterexample.loop) std::cout << ' ' << k.node_name(n);
      std::cout << '\n';
      std::set<int> shown;
      for (const auto& part : {verdict.counterexample.prefix, verdict.counterexample.loop})
        for (int n : part) {
          if (!shown.insert(n).second || n == k.sink_id) continue;
          const fsmsynth::Transition& t = k.nodes[n].transition;
          std::cout << "  " << k.node_name(n) << " = " << t.source << " --" << t.event << '['
                    << t.guard.str() << "]/";
          for (std::size_t a = 0; a < t.actions.size(); ++a)
            std::cout << (a ? "," : "") << t.actions[a];
          std::cout << "--> " << t.target << '\n';
        }
    }
    return all_hold ? kExitOk : kExitDomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run_codegen(const std::string& fsm_path, const std::string& def_path,
                const std::string& out_path, const std::string& manifest_path) {
  try {
    fsmsynth::Fsm m = fsmsynth::from_json(read_file(fsm_path));
    fsmsynth::ContractDef def = fsmsynth::parse_contract_def(read_file(def_path));
    fsmsynth::GeneratedContract contract = fsmsynth::generate_contract(m, def);
    write_file(out_path, contract.source);
    if (!manifest_path.empty()) {
      nlohmann::ordered_json doc = nlohmann::ordered_json::object();
      for (const auto& [method, branches] : contract.manifest) {
        auto& list = doc[method] = nlohmann::ordered_json::array();
        for (const auto& b : branches)
          list.push_back({{"source", b.source},
                          {"guard", b.guard.str()},
                          {"actions", b.actions},
                          {"target", b.target}});
      }
      write_file(manifest_path, doc.dump(2) + "\n");
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run_replay(const std::string& fsm_path, const std::string& scenarios_path) {
  try {
    fsmsynth::Fsm m = fsmsynth::from_json(read_file(fsm_path));
    fsmsynth::ScenarioFile scn =
        fsmsynth::load_scn_file(read_file(scenarios_path), m.alphabet);
    bool all_conform = true;
    for (std::size_t i = 0; i < scn.scenarios.size(); ++i) {
      fsmsynth::ConformanceResult r = fsmsynth::run_scenario(m, scn.scenarios[i]);
      std::cout << "scenario " << (i + 1) << ": " << r.describe() << '\n';
      all_conform = all_conform && r.conforms();
    }
    return all_conform ? kExitOk : kExitDomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guarded-FSM synthesis from LTL specifications and test scenarios,"
               " explicit-state model checking, and contract code generation"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Synthesize a minimal machine");
  synth->add_option("--spec", synth_args.spec_path, "LTL spec file (.ltl)")->required();
  synth->add_option("--scenarios", synth_args.scenarios_path, "scenario file (.scn)")->required();
  synth->add_option("--out", synth_args.out_path, "output machine (fsm.json)")->required();
  synth->add_option("--min-size", synth_args.min_size, "smallest machine size to try");
  synth->add_option("--max-size", synth_args.max_size, "largest machine size to try");
  synth->add_option("--max-iterations", synth_args.max_iterations, "CEGIS candidate budget");
  synth->add_option("--solver", synth_args.solver, "internal or external:<command>");
  synth->add_option("--dot", synth_args.dot_path, "also write Graphviz output");
  synth->add_option("--report", synth_args.report_path, "write a JSON run report");
  synth->add_flag("--scenario-closed", synth_args.scenario_closed,
                  "only allow transitions the scenarios exercise");

  std::string fsm_path, spec_path, def_path, out_path, manifest_path, scenarios_path;
  CLI::App* chk = app.add_subcommand("check", "Model-check formulas against a machine");
  chk->add_option("--fsm", fsm_path, "machine file (fsm.json)")->required();
  chk->add_option("--spec", spec_path, "LTL spec file (.ltl)")->required();

  CLI::App* gen = app.add_subcommand("codegen", "Generate contract source from a machine");
  gen->add_option("--fsm", fsm_path, "machine file (fsm.json)")->required();
  gen->add_option("--def", def_path, "contract definition (.cdef)")->required();
  gen->add_option("--out", out_path, "output source file")->required();
  gen->add_option("--manifest", manifest_path, "also write the method/branch manifest");

  CLI::App* rep = app.add_subcommand("replay", "Replay scenarios against a machine");
  rep->add_option("--fsm", fsm_path, "machine file (fsm.json)")->required();
  rep->add_option("--scenarios", scenarios_path, "scenario file (.scn)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (synth->parsed()) return run_synth(synth_args);
  if (chk->parsed()) return run_check(fsm_path, spec_path);
  if (gen->parsed()) return run_codegen(fsm_path, def_path, out_path, manifest_path);
  if (rep->parsed()) return run_replay(fsm_path, scenarios_path);
  return kExitUsage;
}
