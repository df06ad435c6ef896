#pragma once

#include <set>
#include <string>
#include <vector>

#include "fsmsynth/ltl.hpp"

namespace fsmsynth {

/// Büchi automaton over letters that are sets of atom names, with
/// generalized acceptance: a run is accepting when it visits every
/// acceptance set infinitely often. An edge fires on a letter containing
/// all of pos and none of neg.
struct BuchiAutomaton {
  struct Edge {
    int to = 0;
    std::vector<std::string> pos;
    std::vector<std::string> neg;
  };

  int num_states = 0;
  /// Entry pseudo-edges: e.to is an initial state, e.pos/e.neg the
  /// constraint on the first letter read.
  std::vector<Edge> initial;
  std::vector<std::vector<Edge>> edges;      // indexed by source state
  std::vector<std::vector<int>> acceptance;  // nonempty collection of sets

  std::vector<int> initial_states() const;

  static bool edge_enabled(const Edge& e, const std::set<std::string>& letter);
};

/// Tableau (node-cover) translation. The input must be in NNF; Future and
/// Globally are rewritten to Until/Release internally, so the acceptance
/// collection has one set per Until subformula (or the trivial all-states
/// set when there is none).
BuchiAutomaton ltl_to_buchi(const FormulaPtr& nnf);

}  // namespace fsmsynth
