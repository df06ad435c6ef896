#pragma once

#include "fsmsynth/buchi.hpp"
#include "fsmsynth/machine.hpp"

namespace fsmsynth {

/// Counterexample path through a Kripke structure: prefix then loop,
/// both as node ids.
struct KripkeLasso {
  std::vector<int> prefix;
  std::vector<int> loop;
};

struct Verdict {
  bool holds = true;
  KripkeLasso counterexample;  // meaningful when !holds

  explicit operator bool() const { return holds; }
};

/// Explicit-state check of f over m: builds the Kripke structure,
/// translates !f to a Büchi automaton and searches the product for an
/// accepting lasso by nested depth-first search (generalized acceptance
/// handled with a counter layer rather than automaton blow-up).
Verdict check(const Fsm& m, const FormulaPtr& f);

/// Same search on a prebuilt structure. With skip_sink the search is
/// restricted to lassos over real transition nodes (no END sink).
Verdict check_kripke(const KripkeStructure& k, const FormulaPtr& f, bool skip_sink = false);

/// Word spelled by a lasso, for replaying counterexamples through
/// eval_on_lasso.
Lasso lasso_labels(const KripkeStructure& k, const KripkeLasso& lasso);

}  // namespace fsmsynth
