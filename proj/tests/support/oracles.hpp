#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "fsmsynth/buchi.hpp"
#include "fsmsynth/ltl.hpp"
#include "fsmsynth/machine.hpp"

// Independent oracles the implementation is tested against. They share no
// code with the evaluator, the translation or the checker they judge:
// naive_eval rewrites to a small core and scans unrolled positions,
// holds_by_enumeration enumerates lassos outright, accepts_lasso decides
// automaton acceptance by SCC analysis instead of nested DFS.
namespace testoracle {

using fsmsynth::Formula;
using fsmsynth::FormulaPtr;
using fsmsynth::Lasso;
using fsmsynth::Op;

// Rewrite into the core {atom, true, false, not, and, X, U}.
inline FormulaPtr core_rewrite(const FormulaPtr& f) {
  auto not_ = [](FormulaPtr g) { return Formula::negation(std::move(g)); };
  auto or_ = [&](FormulaPtr a, FormulaPtr b) {
    return not_(Formula::conj(not_(std::move(a)), not_(std::move(b))));
  };
  switch (f->op()) {
    case Op::True:
    case Op::False:
    case Op::Atom: return f;
    case Op::Not: return not_(core_rewrite(f->lhs()));
    case Op::And: return Formula::conj(core_rewrite(f->lhs()), core_rewrite(f->rhs()));
    case Op::Or: return or_(core_rewrite(f->lhs()), core_rewrite(f->rhs()));
    case Op::Implies: return or_(not_(core_rewrite(f->lhs())), core_rewrite(f->rhs()));
    case Op::Next: return Formula::next(core_rewrite(f->lhs()));
    case Op::Future: return Formula::until(Formula::tru(), core_rewrite(f->lhs()));
    case Op::Globally:
      return not_(Formula::until(Formula::tru(), not_(core_rewrite(f->lhs()))));
    case Op::Until: return Formula::until(core_rewrite(f->lhs()), core_rewrite(f->rhs()));
    case Op::Release:
      return not_(Formula::until(not_(core_rewrite(f->lhs())), not_(core_rewrite(f->rhs()))));
  }
  return f;
}

// Direct scan over at most |positions|+1 unrolled steps; a shortest Until
// witness never needs more, since a longer one revisits a position.
inline bool eval_core(const FormulaPtr& f, const Lasso& w, std::size_t pos) {
  switch (f->op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return w.at(pos).count(f->atom_name()) > 0;
    case Op::Not: return !eval_core(f->lhs(), w, pos);
    case Op::And: return eval_core(f->lhs(), w, pos) && eval_core(f->rhs(), w, pos);
    case Op::Next: return eval_core(f->lhs(), w, w.next(pos));
    case Op::Until: {
      std::size_t j = pos;
      for (std::size_t k = 0; k <= w.length(); ++k) {
        if (eval_core(f->rhs(), w, j)) return true;
        if (!eval_core(f->lhs(), w, j)) return false;
        j = w.next(j);
      }
      return false;
    }
    default: throw std::logic_error("eval_core expects a core formula");
  }
}

inline bool naive_eval(const FormulaPtr& f, const Lasso& w) {
  return eval_core(core_rewrite(f), w, 0);
}

// Every initial lasso of k with |prefix| + |loop| <= bound satisfies f.
inline bool holds_by_enumeration(const fsmsynth::KripkeStructure& k, const FormulaPtr& f,
                                 int bound) {
  std::vector<int> path;
  std::function<bool(void)> extend = [&]() -> bool {
    int last = path.back();
    for (std::size_t j = 0; j < path.size(); ++j) {
      if (std::find(k.succ[last].begin(), k.succ[last].end(), path[j]) == k.succ[last].end())
        continue;
      Lasso w;
      for (std::size_t i = 0; i < j; ++i) w.prefix.push_back(k.labels[path[i]]);
      for (std::size_t i = j; i < path.size(); ++i) w.loop.push_back(k.labels[path[i]]);
      if (!naive_eval(f, w)) return false;
    }
    if (path.size() < static_cast<std::size_t>(bound)) {
      for (int next : k.succ[last]) {
        path.push_back(next);
        if (!extend()) return false;
        path.pop_back();
      }
    }
    return true;
  };
  for (int n0 : k.initial) {
    path.assign(1, n0);
    if (!extend()) return false;
  }
  return true;
}

// Acceptance of prefix.loop^w by SCC analysis of the (position, state)
// graph: accepting iff some reachable SCC has an internal edge and meets
// every acceptance set.
inline bool accepts_lasso(const fsmsynth::BuchiAutomaton& a, const Lasso& w) {
  int n = static_cast<int>(w.length());
  if (a.num_states == 0) return false;
  auto id = [&](int pos, int q) { return pos * a.num_states + q; };
  int total = n * a.num_states;

  std::vector<char> reached(total, 0);
  std::vector<int> worklist;
  for (const auto& entry : a.initial) {
    if (!fsmsynth::BuchiAutomaton::edge_enabled(entry, w.at(0))) continue;
    int v = id(0, entry.to);
    if (!reached[v]) {
      reached[v] = 1;
      worklist.push_back(v);
    }
  }
  std::vector<std::vector<int>> succ(total);
  while (!worklist.empty()) {
    int v = worklist.back();
    worklist.pop_back();
    int pos = v / a.num_states, q = v % a.num_states;
    int npos = static_cast<int>(w.next(pos));
    for (const auto& e : a.edges[q]) {
      if (!fsmsynth::BuchiAutomaton::edge_enabled(e, w.at(npos))) continue;
      int u = id(npos, e.to);
      succ[v].push_back(u);
      if (!reached[u]) {
        reached[u] = 1;
        worklist.push_back(u);
      }
    }
  }

  // Tarjan over the reached subgraph.
  std::vector<int> index(total, -1), low(total, 0), comp(total, -1);
  std::vector<char> on_stack(total, 0);
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;
  std::function<void(int)> strongconnect = [&](int v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (int u : succ[v]) {
      if (index[u] < 0) {
        strongconnect(u);
        low[v] = std::min(low[v], low[u]);
      } else if (on_stack[u]) {
        low[v] = std::min(low[v], index[u]);
      }
    }
    if (low[v] == index[v]) {
      while (true) {
        int u = stack.back();
        stack.pop_back();
        on_stack[u] = 0;
        comp[u] = next_comp;
        if (u == v) break;
      }
      ++next_comp;
    }
  };
  for (int v = 0; v < total; ++v)
    if (reached[v] && index[v] < 0) strongconnect(v);

  std::vector<char> has_internal_edge(next_comp, 0);
  for (int v = 0; v < total; ++v)
    if (reached[v])
      for (int u : succ[v])
        if (comp[u] == comp[v]) has_internal_edge[comp[v]] = 1;

  std::size_t num_sets = a.acceptance.size();
  std::vector<std::vector<char>> in_set(num_sets, std::vector<char>(a.num_states, 0));
  for (std::size_t i = 0; i < num_sets; ++i)
    for (int q : a.acceptance[i]) in_set[i][q] = 1;

  for (int c = 0; c < next_comp; ++c) {
    if (!has_internal_edge[c]) continue;
    bool all = true;
    for (std::size_t i = 0; i < num_sets && all; ++i) {
      bool found = false;
      for (int v = 0; v < total && !found; ++v)
        if (reached[v] && comp[v] == c && in_set[i][v % a.num_states]) found = true;
      all = found;
    }
    if (all) return true;
  }
  return false;
}

}  // namespace testoracle
