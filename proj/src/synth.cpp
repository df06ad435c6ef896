#include "fsmsynth/synth.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

namespace fsmsynth {

// --- variable map -------------------------------------------------------------

VarMap::VarMap(const ScenarioTree& tree, int size, const Alphabet& alphabet)
    : size_(size), nodes_(tree.node_count()) {
  // Candidate vocabulary: pairs and action sequences observed in the tree,
  // plus (event, true) with the implicit action for every event.
  std::map<LabelPair, std::set<ActionSeq>> observed;
  for (const auto& edges : tree.children)
    for (const auto& e : edges) observed[{e.event, e.guard}].insert(e.actions);
  for (const auto& event : alphabet.events()) {
    observed[{event, GuardExpr::always()}].insert({alphabet.implicit_action(event)});
  }

  for (auto& [pair, seqs] : observed) {
    // The implicit singleton is a candidate for every pair of its event.
    seqs.insert({alphabet.implicit_action(pair.event)});
    pairs_.push_back(pair);
    actions_.emplace_back(seqs.begin(), seqs.end());
  }

  z_offset_.resize(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    z_offset_[p] = z_stride_;
    z_stride_ += static_cast<int>(actions_[p].size());
  }

  int P = pair_count();
  u_base_ = nodes_ * size_;
  y_base_ = u_base_ + size_ * P;
  z_base_ = y_base_ + size_ * P * size_;
  z_total_ = size_ * z_stride_;
}

std::optional<int> VarMap::pair_index(const std::string& event, const GuardExpr& guard) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), LabelPair{event, guard});
  if (it == pairs_.end() || !(*it == LabelPair{event, guard})) return std::nullopt;
  return static_cast<int>(it - pairs_.begin());
}

std::optional<int> VarMap::action_index(int pair, const ActionSeq& seq) const {
  const auto& cands = actions_[pair];
  auto it = std::find(cands.begin(), cands.end(), seq);
  if (it == cands.end()) return std::nullopt;
  return static_cast<int>(it - cands.begin());
}

int VarMap::x(int node, int state) const { return 1 + node * size_ + state; }
int VarMap::u(int state, int pair) const { return 1 + u_base_ + state * pair_count() + pair; }
int VarMap::y(int state, int pair, int target) const {
  return 1 + y_base_ + (state * pair_count() + pair) * size_ + target;
}
int VarMap::z(int state, int pair, int action) const {
  return 1 + z_base_ + state * z_stride_ + z_offset_[pair] + action;
}

// --- encoding -------------------------------------------------------------------

namespace {

void exactly_one(CnfInstance& cnf, const std::vector<int>& vars) {
  cnf.add(std::vector<int>(vars.begin(), vars.end()));
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j) cnf.add({-vars[i], -vars[j]});
}

// BFS symmetry breaking over the state numbering: every state except 0 has
// a BFS parent (the smallest state with an edge to it), parents are
// nondecreasing in child order, and children of a shared parent are
// ordered by their smallest incoming label. Kills state-relabeling
// symmetry and, with ascending size iteration, costs no solutions.
void encode_bfs_symmetry(CnfInstance& cnf, const VarMap& vm) {
  int size = vm.size();
  int P = vm.pair_count();
  if (size < 2) return;

  // rel(a,b) for a < b: some transition a -> b exists.
  std::map<std::pair<int, int>, int> rel;
  for (int a = 0; a < size; ++a)
    for (int b = a + 1; b < size; ++b) {
      int t = cnf.new_var();
      rel[{a, b}] = t;
      std::vector<int> any{-t};
      for (int p = 0; p < P; ++p) {
        cnf.add({-vm.y(a, p, b), t});
        any.push_back(vm.y(a, p, b));
      }
      cnf.add(std::move(any));
    }

  // parent(b,a) for a < b: a is the smallest state with an edge to b.
  std::map<std::pair<int, int>, int> parent;
  for (int b = 1; b < size; ++b) {
    std::vector<int> some;
    for (int a = 0; a < b; ++a) {
      int pv = cnf.new_var();
      parent[{b, a}] = pv;
      some.push_back(pv);
      cnf.add({-pv, rel[{a, b}]});
      std::vector<int> completion{pv, -rel[{a, b}]};
      for (int c = 0; c < a; ++c) {
        cnf.add({-pv, -rel[{c, b}]});
        completion.push_back(rel[{c, b}]);
      }
      cnf.add(std::move(completion));
    }
    cnf.add(std::move(some));  // b is reachable from below
  }

  // Parents nondecreasing in child order.
  for (int b = 1; b + 1 < size; ++b)
    for (int a = 0; a < b; ++a)
      for (int c = 0; c < a; ++c) cnf.add({-parent[{b, a}], -parent[{b + 1, c}]});

  // minlab(a,b,p): p is the smallest label pair with y(a,p,b).
  std::map<std::tuple<int, int, int>, int> minlab;
  for (int a = 0; a < size; ++a)
    for (int b = a + 1; b < size; ++b)
      for (int p = 0; p < P; ++p) {
        int mv = cnf.new_var();
        minlab[{a, b, p}] = mv;
        cnf.add({-mv, vm.y(a, p, b)});
        std::vector<int> completion{mv, -vm.y(a, p, b)};
        for (int q = 0; q < p; ++q) {
          cnf.add({-mv, -vm.y(a, q, b)});
          completion.push_back(vm.y(a, q, b));
        }
        cnf.add(std::move(completion));
      }

  // Children of a shared parent are ordered by smallest incoming label.
  for (int a = 0; a < size; ++a)
    for (int b = a + 1; b + 1 < size; ++b)
      for (int p = 0; p < P; ++p)
        for (int q = 0; q <= p; ++q)
          cnf.add({-parent[{b, a}], -parent[{b + 1, a}], -minlab[{a, b, p}],
                   -minlab[{a, b + 1, q}]});
}

}  // namespace

std::pair<CnfInstance, VarMap> encode_consistency(const ScenarioTree& tree, int size,
                                                  const Alphabet& alphabet,
                                                  bool scenario_closed) {
  if (size < 1) throw ValidationError("machine size must be at least 1");
  VarMap vm(tree, size, alphabet);
  CnfInstance cnf;
  cnf.num_vars = vm.decision_vars();

  int V = vm.node_count();
  int P = vm.pair_count();

  // (a) every tree node maps to exactly one state; (b) the root to state 0.
  for (int v = 0; v < V; ++v) {
    std::vector<int> vars;
    for (int s = 0; s < size; ++s) vars.push_back(vm.x(v, s));
    exactly_one(cnf, vars);
  }
  cnf.add({vm.x(0, 0)});

  // (c) tree edges force the transition, its outputs and the child state.
  for (int v = 0; v < V; ++v) {
    for (const auto& e : tree.children[v]) {
      int p = *vm.pair_index(e.event, e.guard);
      int a = *vm.action_index(p, e.actions);
      for (int s = 0; s < size; ++s) {
        cnf.add({-vm.x(v, s), vm.u(s, p)});
        cnf.add({-vm.x(v, s), vm.z(s, p, a)});
        for (int t = 0; t < size; ++t)
          cnf.add({-vm.x(v, s), -vm.y(s, p, t), vm.x(e.child, t)});
      }
    }
  }

  // (d) an existing transition has exactly one target and output sequence.
  for (int s = 0; s < size; ++s) {
    for (int p = 0; p < P; ++p) {
      std::vector<int> targets, seqs;
      for (int t = 0; t < size; ++t) targets.push_back(vm.y(s, p, t));
      int A = static_cast<int>(vm.action_candidates(p).size());
      for (int a = 0; a < A; ++a) seqs.push_back(vm.z(s, p, a));

      std::vector<int> some_target{-vm.u(s, p)};
      some_target.insert(some_target.end(), targets.begin(), targets.end());
      cnf.add(std::move(some_target));
      std::vector<int> some_seq{-vm.u(s, p)};
      some_seq.insert(some_seq.end(), seqs.begin(), seqs.end());
      cnf.add(std::move(some_seq));

      for (std::size_t i = 0; i < targets.size(); ++i) {
        cnf.add({-targets[i], vm.u(s, p)});
        for (std::size_t j = i + 1; j < targets.size(); ++j)
          cnf.add({-targets[i], -targets[j]});
      }
      for (std::size_t i = 0; i < seqs.size(); ++i) {
        cnf.add({-seqs[i], vm.u(s, p)});
        for (std::size_t j = i + 1; j < seqs.size(); ++j) cnf.add({-seqs[i], -seqs[j]});
      }
    }
  }

  // Optional closure: transitions only where the tree exercises them.
  if (scenario_closed) {
    for (int s = 0; s < size; ++s) {
      for (int p = 0; p < P; ++p) {
        std::vector<int> witness{-vm.u(s, p)};
        for (int v = 0; v < V; ++v) {
          for (const auto& e : tree.children[v]) {
            if (vm.pair_index(e.event, e.guard) == p) {
              witness.push_back(vm.x(v, s));
              break;
            }
          }
        }
        cnf.add(std::move(witness));
      }
    }
  }

  // (e) symmetry breaking.
  encode_bfs_symmetry(cnf, vm);

  return {std::move(cnf), std::move(vm)};
}

// --- counterexample prohibition --------------------------------------------------

std::vector<int> prohibit_counterexample(const VarMap& vm, const std::vector<Transition>& steps) {
  if (steps.empty()) throw ValidationError("empty counterexample");
  std::set<int> lits;
  for (const Transition& t : steps) {
    auto p = vm.pair_index(t.event, t.guard);
    if (!p) throw ValidationError("counterexample step outside the candidate vocabulary");
    auto a = vm.action_index(*p, t.actions);
    if (!a) throw ValidationError("counterexample actions outside the candidate vocabulary");
    lits.insert(-vm.y(t.source, *p, t.target));
    lits.insert(-vm.z(t.source, *p, *a));
  }
  return {lits.begin(), lits.end()};
}

std::vector<int> prohibition_clause(const VarMap& vm, const Fsm& candidate,
                                    const KripkeStructure& k, const KripkeLasso& lasso) {
  std::vector<int> path = lasso.prefix;
  path.insert(path.end(), lasso.loop.begin(), lasso.loop.end());

  std::vector<Transition> steps;
  int dead_state = -1;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] == k.sink_id) {
      if (dead_state < 0)
        dead_state = i == 0 ? candidate.initial : k.nodes[path[i - 1]].transition.target;
      continue;
    }
    steps.push_back(k.nodes[path[i]].transition);
  }

  std::set<int> lits;
  if (!steps.empty())
    for (int l : prohibit_counterexample(vm, steps)) lits.insert(l);
  if (dead_state >= 0)
    for (int p = 0; p < vm.pair_count(); ++p) lits.insert(vm.u(dead_state, p));
  if (lits.empty()) throw ValidationError("degenerate counterexample lasso");
  return {lits.begin(), lits.end()};
}

// --- decoding ----------------------------------------------------------------------

Fsm decode_model(const std::vector<bool>& model, const VarMap& vm, int size,
                 const Alphabet& alphabet) {
  Fsm m;
  m.size = size;
  m.initial = 0;
  m.alphabet = alphabet;
  for (int s = 0; s < size; ++s) {
    for (int p = 0; p < vm.pair_count(); ++p) {
      if (!model[vm.u(s, p)]) continue;
      int target = -1;
      for (int t = 0; t < size; ++t) {
        if (model[vm.y(s, p, t)]) {
          if (target >= 0) throw std::logic_error("two targets for one transition");
          target = t;
        }
      }
      int action = -1;
      int A = static_cast<int>(vm.action_candidates(p).size());
      for (int a = 0; a < A; ++a) {
        if (model[vm.z(s, p, a)]) {
          if (action >= 0) throw std::logic_error("two action sequences for one transition");
          action = a;
        }
      }
      if (target < 0 || action < 0)
        throw std::logic_error("transition with no target or action sequence");
      m.transitions.push_back({s, vm.pairs()[p].event, vm.pairs()[p].guard,
                               vm.action_candidates(p)[action], target});
    }
  }
  sort_transitions(m.transitions);
  return m;
}

// --- CEGIS loop ---------------------------------------------------------------------

SynthesisResult synthesize(const std::vector<FormulaPtr>& spec,
                           const std::vector<Scenario>& scenarios, const Alphabet& alphabet,
                           const SynthesisConfig& config) {
  using Clock = std::chrono::steady_clock;
  auto seconds_since = [](Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  auto total_start = Clock::now();

  if (config.min_size < 1 || config.min_size > config.max_size)
    throw ValidationError("size bounds must satisfy 1 <= min_size <= max_size");

  ScenarioTree tree = build_scenario_tree(scenarios);
  SynthesisResult result;

  for (int size = config.min_size; size <= config.max_size; ++size) {
    result.size = size;

    auto encode_start = Clock::now();
    auto [cnf, vm] = encode_consistency(tree, size, alphabet, config.scenario_closed);
    auto solver = make_solver(config.solver);
    solver->add_instance(cnf);
    result.variables = cnf.num_vars;
    result.clauses = static_cast<long>(cnf.clauses.size());
    result.encode_seconds += seconds_since(encode_start);

    while (true) {
      auto solve_start = Clock::now();
      SolveStatus status = solver->solve();
      result.solve_seconds += seconds_since(solve_start);
      if (status == SolveStatus::Unsat) break;

      if (result.iterations >= config.max_cegis_iterations) {
        result.outcome = SynthesisResult::Outcome::BudgetExceeded;
        result.total_seconds = seconds_since(total_start);
        return result;
      }
      ++result.iterations;

      Fsm candidate = decode_model(solver->model(), vm, size, alphabet);

      auto check_start = Clock::now();
      KripkeStructure k = build_kripke(candidate);
      const FormulaPtr* violated = nullptr;
      KripkeLasso lasso;
      for (const FormulaPtr& f : spec) {
        Verdict v = check_kripke(k, f);
        if (!v.holds) {
          violated = &f;
          lasso = std::move(v.counterexample);
          break;
        }
      }
      result.check_seconds += seconds_since(check_start);

      if (!violated) {
        for (const Scenario& s : scenarios)
          if (!run_scenario(candidate, s).conforms())
            throw std::logic_error("synthesized machine fails a scenario it was encoded from");
        result.outcome = SynthesisResult::Outcome::Ok;
        result.machine = std::move(candidate);
        result.total_seconds = seconds_since(total_start);
        return result;
      }

      std::vector<int> clause = prohibition_clause(vm, candidate, k, lasso);
      solver->add_clause(clause);
      ++result.clauses;
    }
  }

  result.outcome = SynthesisResult::Outcome::Unrealizable;
  result.size = config.max_size;
  result.total_seconds = seconds_since(total_start);
  return result;
}

}  // namespace fsmsynth
