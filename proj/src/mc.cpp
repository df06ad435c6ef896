#include "fsmsynth/mc.hpp"

#include <cstdint>
#include <unordered_map>
#include <unordered_set>

namespace fsmsynth {

namespace {

// Product of the Kripke structure with A(!f) plus a degeneralization
// counter. A product state (n, q, j) means the automaton entered q while
// reading L(n), having fulfilled acceptance sets 0..j-1 since the last
// wrap; j == K is the accepting layer. Counterexamples are found with the
// two-color nested DFS, red searches seeded at accepting postorders.
class ProductSearch {
 public:
  ProductSearch(const KripkeStructure& k, const BuchiAutomaton& a, bool skip_sink)
      : k_(k), a_(a), skip_sink_(skip_sink), num_sets_(static_cast<int>(a.acceptance.size())) {
    in_set_.assign(static_cast<std::size_t>(num_sets_) * std::max(a_.num_states, 1), 0);
    for (int i = 0; i < num_sets_; ++i)
      for (int q : a_.acceptance[i]) in_set_[static_cast<std::size_t>(i) * a_.num_states + q] = 1;
  }

  bool find_lasso(KripkeLasso& out) {
    for (int n0 : k_.initial) {
      if (skip_sink_ && n0 == k_.sink_id) continue;
      for (const auto& entry : a_.initial) {
        if (!BuchiAutomaton::edge_enabled(entry, k_.labels[n0])) continue;
        State s{n0, entry.to, advance(0, entry.to)};
        if (!blue_.count(key(s)) && !cyan_.count(key(s)))
          if (dfs_blue(s, out)) return true;
      }
    }
    return false;
  }

 private:
  struct State {
    int node;
    int buchi;
    int counter;
  };

  std::uint64_t key(const State& s) const {
    return (static_cast<std::uint64_t>(s.node) * a_.num_states + s.buchi) *
               (num_sets_ + 1) +
           s.counter;
  }

  bool accepting(const State& s) const { return s.counter == num_sets_; }

  int advance(int j, int q) const {
    if (j == num_sets_) j = 0;
    while (j < num_sets_ && in_set_[static_cast<std::size_t>(j) * a_.num_states + q]) ++j;
    return j;
  }

  std::vector<State> successors(const State& s) const {
    std::vector<State> out;
    for (int n2 : k_.succ[s.node]) {
      if (skip_sink_ && n2 == k_.sink_id) continue;
      for (const auto& e : a_.edges[s.buchi]) {
        if (!BuchiAutomaton::edge_enabled(e, k_.labels[n2])) continue;
        out.push_back({n2, e.to, advance(s.counter, e.to)});
      }
    }
    return out;
  }

  bool dfs_blue(const State& s, KripkeLasso& out) {
    cyan_[key(s)] = static_cast<int>(stack_.size());
    stack_.push_back(s);
    for (const State& t : successors(s)) {
      auto it = cyan_.find(key(t));
      if (it != cyan_.end() && (accepting(s) || accepting(t))) {
        extract(it->second, {}, out);
        return true;
      }
      if (it == cyan_.end() && !blue_.count(key(t)))
        if (dfs_blue(t, out)) return true;
    }
    if (accepting(s)) {
      red_path_.clear();
      if (dfs_red(s, out)) return true;
    }
    blue_.insert(key(s));
    cyan_.erase(key(s));
    stack_.pop_back();
    return false;
  }

  bool dfs_red(const State& s, KripkeLasso& out) {
    red_.insert(key(s));
    for (const State& t : successors(s)) {
      auto it = cyan_.find(key(t));
      if (it != cyan_.end()) {
        extract(it->second, red_path_, out);
        return true;
      }
      if (!red_.count(key(t))) {
        red_path_.push_back(t);
        if (dfs_red(t, out)) return true;
        red_path_.pop_back();
      }
    }
    return false;
  }

  // The cycle runs through stack_[loop_start..top] plus an optional red
  // tail whose last state has an edge back to stack_[loop_start].
  void extract(int loop_start, const std::vector<State>& red_tail, KripkeLasso& out) const {
    out.prefix.clear();
    out.loop.clear();
    for (int i = 0; i < loop_start; ++i) out.prefix.push_back(stack_[i].node);
    for (std::size_t i = loop_start; i < stack_.size(); ++i) out.loop.push_back(stack_[i].node);
    for (const State& s : red_tail) out.loop.push_back(s.node);
  }

  const KripkeStructure& k_;
  const BuchiAutomaton& a_;
  bool skip_sink_;
  int num_sets_;
  std::vector<char> in_set_;
  std::unordered_map<std::uint64_t, int> cyan_;  // value: index into stack_
  std::unordered_set<std::uint64_t> blue_;
  std::unordered_set<std::uint64_t> red_;
  std::vector<State> stack_;
  std::vector<State> red_path_;
};

}  // namespace

Lasso lasso_labels(const KripkeStructure& k, const KripkeLasso& lasso) {
  Lasso w;
  for (int n : lasso.prefix) w.prefix.push_back(k.labels[n]);
  for (int n : lasso.loop) w.loop.push_back(k.labels[n]);
  return w;
}

Verdict check_kripke(const KripkeStructure& k, const FormulaPtr& f, bool skip_sink) {
  BuchiAutomaton a = ltl_to_buchi(to_nnf(Formula::negation(f)));
  ProductSearch search(k, a, skip_sink);
  KripkeLasso lasso;
  if (search.find_lasso(lasso)) return {false, std::move(lasso)};
  return {};
}

Verdict check(const Fsm& m, const FormulaPtr& f) {
  for (const auto& atom : atoms_of(f)) {
    if (atom == kEndLabel)
      throw ValidationError("reserved atom END cannot appear in checked formulas");
    if (!m.alphabet.contains(atom))
      throw ValidationError("formula atom '" + atom + "' is not in the machine's alphabet");
  }
  return check_kripke(build_kripke(m), f);
}

}  // namespace fsmsynth
