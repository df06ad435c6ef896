#pragma once

#include <set>
#include <string>
#include <vector>

#include "fsmsynth/alphabet.hpp"
#include "fsmsynth/scenario.hpp"

namespace fsmsynth {

struct Transition {
  int source = 0;
  std::string event;
  GuardExpr guard;
  std::vector<std::string> actions;
  int target = 0;

  auto operator<=>(const Transition&) const = default;
};

/// Guarded FSM with states 0..size-1. The transition map is deliberately
/// partial: an event with no matching transition is a rejection.
struct Fsm {
  int size = 1;
  int initial = 0;
  Alphabet alphabet;
  std::vector<Transition> transitions;

  /// Semantic equality: transition order is irrelevant.
  bool operator==(const Fsm& other) const;
};

/// Canonical transition order: (source, event, guard, target, actions).
void sort_transitions(std::vector<Transition>& transitions);
std::vector<Transition> sorted_transitions(const Fsm& m);

/// Structural checks: duplicate (source, event, guard) keys, undeclared
/// names, out-of-range state ids, unreachable states. Empty result = valid.
std::vector<std::string> validate_fsm(const Fsm& m);

/// One node per transition, plus one END-labeled sink when the machine has
/// dead ends; see build_kripke.
struct KripkeNode {
  bool sink = false;
  Transition transition;  // meaningful when !sink
};

struct KripkeStructure {
  std::vector<KripkeNode> nodes;
  std::vector<int> initial;
  std::vector<std::vector<int>> succ;
  std::vector<std::set<std::string>> labels;

  int sink_id = -1;  // -1 when no sink was needed
  std::string node_name(int id) const;
};

/// Transition-as-state semantics: node labels are the event, the guard
/// variable when the literal is positive, and the output actions. Dead-end
/// nodes get an edge to a self-looping sink labeled END, keeping the edge
/// relation left-total.
KripkeStructure build_kripke(const Fsm& m);

struct ConformanceResult {
  enum class Status { Conforms, NoTransition, ActionMismatch };

  Status status = Status::Conforms;
  std::size_t step = 0;

  bool conforms() const { return status == Status::Conforms; }
  std::string describe() const;
};

/// Replays a scenario from the initial state. A step matches the unique
/// transition with equal (state, event, guard); conformance additionally
/// requires the emitted action sequence to equal the step's.
ConformanceResult run_scenario(const Fsm& m, const Scenario& s);

/// Graphviz digraph with edges labeled `event [guard] / a1, a2`,
/// transitions in canonical order.
std::string export_dot(const Fsm& m);

std::string to_json(const Fsm& m);
Fsm from_json(std::string_view text);

}  // namespace fsmsynth
