#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fsmsynth/machine.hpp"
#include "fsmsynth/mc.hpp"
#include "fsmsynth/sat.hpp"
#include "fsmsynth/scenario.hpp"

namespace fsmsynth {

struct SynthesisConfig {
  int min_size = 1;
  int max_size = 8;
  int max_cegis_iterations = 10000;  // candidates examined, over all sizes
  SolverConfig solver;
  bool scenario_closed = false;  // restrict transitions to tree-exercised shapes
};

using ActionSeq = std::vector<std::string>;

/// Bijection between synthesis decisions and propositional variables:
///   x(v,s)    tree node v maps to machine state s
///   u(s,p)    transition (s, event, guard) exists; p indexes label pairs
///   y(s,p,t)  that transition targets state t
///   z(s,p,a)  that transition emits candidate action sequence a
/// Candidate label pairs per event are the guards observed with it in the
/// scenarios plus the bare (event, true); candidate action sequences per
/// pair are the observed ones plus the event's implicit singleton.
class VarMap {
 public:
  struct LabelPair {
    std::string event;
    GuardExpr guard;
    auto operator<=>(const LabelPair&) const = default;
  };

  VarMap(const ScenarioTree& tree, int size, const Alphabet& alphabet);

  int size() const { return size_; }
  int node_count() const { return nodes_; }
  int pair_count() const { return static_cast<int>(pairs_.size()); }
  const std::vector<LabelPair>& pairs() const { return pairs_; }
  const std::vector<ActionSeq>& action_candidates(int pair) const { return actions_[pair]; }

  std::optional<int> pair_index(const std::string& event, const GuardExpr& guard) const;
  std::optional<int> action_index(int pair, const ActionSeq& seq) const;

  int x(int node, int state) const;
  int u(int state, int pair) const;
  int y(int state, int pair, int target) const;
  int z(int state, int pair, int action) const;

  int decision_vars() const { return z_base_ + z_total_; }

 private:
  int size_ = 0;
  int nodes_ = 0;
  std::vector<LabelPair> pairs_;
  std::vector<std::vector<ActionSeq>> actions_;
  std::vector<int> z_offset_;  // per pair, into the per-state z block
  int z_stride_ = 0;           // z vars per state
  int u_base_ = 0, y_base_ = 0, z_base_ = 0, z_total_ = 0;
};

/// CNF encoding of scenario-tree consistency for a fixed machine size,
/// including BFS symmetry breaking over the state numbering.
std::pair<CnfInstance, VarMap> encode_consistency(const ScenarioTree& tree, int size,
                                                  const Alphabet& alphabet,
                                                  bool scenario_closed = false);

/// One clause excluding every machine that realizes all the given steps
/// simultaneously. Steps must be transitions of the rejected candidate.
std::vector<int> prohibit_counterexample(const VarMap& vm, const std::vector<Transition>& steps);

/// Prohibition clause for a counterexample lasso. When the lasso runs into
/// the END sink, the clause also allows any machine that gives the dead
/// state an outgoing transition, since that removes the lasso.
std::vector<int> prohibition_clause(const VarMap& vm, const Fsm& candidate,
                                    const KripkeStructure& k, const KripkeLasso& lasso);

/// Reads a machine off a satisfying assignment.
Fsm decode_model(const std::vector<bool>& model, const VarMap& vm, int size,
                 const Alphabet& alphabet);

struct SynthesisResult {
  enum class Outcome { Ok, Unrealizable, BudgetExceeded };

  Outcome outcome = Outcome::Unrealizable;
  std::optional<Fsm> machine;
  int size = 0;        // found size, or the last size attempted
  int iterations = 0;  // CEGIS candidates examined, over all sizes
  int variables = 0;   // of the last instance
  long clauses = 0;    // including prohibition clauses
  double encode_seconds = 0.0;
  double solve_seconds = 0.0;
  double check_seconds = 0.0;
  double total_seconds = 0.0;
};

/// Bounded synthesis: for each size from min_size up, alternate SAT
/// solving against the scenario encoding with model checking of the
/// decoded candidate, prohibiting counterexamples until either a machine
/// satisfies every formula or the instance becomes unsatisfiable.
SynthesisResult synthesize(const std::vector<FormulaPtr>& spec,
                           const std::vector<Scenario>& scenarios, const Alphabet& alphabet,
                           const SynthesisConfig& config);

}  // namespace fsmsynth
