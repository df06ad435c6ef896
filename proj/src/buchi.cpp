#include "fsmsynth/buchi.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace fsmsynth {

bool BuchiAutomaton::edge_enabled(const Edge& e, const std::set<std::string>& letter) {
  for (const auto& a : e.pos)
    if (!letter.count(a)) return false;
  for (const auto& a : e.neg)
    if (letter.count(a)) return false;
  return true;
}

std::vector<int> BuchiAutomaton::initial_states() const {
  std::vector<int> out;
  for (const auto& e : initial) out.push_back(e.to);
  return out;
}

namespace {

FormulaPtr rewrite_fg(const FormulaPtr& f) {
  switch (f->op()) {
    case Op::Future: return Formula::until(Formula::tru(), rewrite_fg(f->lhs()));
    case Op::Globally: return Formula::release(Formula::fls(), rewrite_fg(f->lhs()));
    case Op::Not: return Formula::negation(rewrite_fg(f->lhs()));
    case Op::Next: return Formula::next(rewrite_fg(f->lhs()));
    case Op::And: return Formula::conj(rewrite_fg(f->lhs()), rewrite_fg(f->rhs()));
    case Op::Or: return Formula::disj(rewrite_fg(f->lhs()), rewrite_fg(f->rhs()));
    case Op::Until: return Formula::until(rewrite_fg(f->lhs()), rewrite_fg(f->rhs()));
    case Op::Release: return Formula::release(rewrite_fg(f->lhs()), rewrite_fg(f->rhs()));
    default: return f;
  }
}

// Hash-consed view of the rewritten formula: sets of subformulas become
// sets of ints.
class Interner {
 public:
  int intern(const FormulaPtr& f) {
    int l = f->lhs() ? intern(f->lhs()) : -1;
    int r = f->rhs() ? intern(f->rhs()) : -1;
    Key key{f->op(), f->op() == Op::Atom ? f->atom_name() : std::string(), l, r};
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(defs_.size());
    defs_.push_back(key);
    ids_.emplace(std::move(key), id);
    return id;
  }

  Op op(int id) const { return std::get<0>(defs_[id]); }
  const std::string& atom(int id) const { return std::get<1>(defs_[id]); }
  int lhs(int id) const { return std::get<2>(defs_[id]); }
  int rhs(int id) const { return std::get<3>(defs_[id]); }

  std::vector<int> untils() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < defs_.size(); ++i)
      if (std::get<0>(defs_[i]) == Op::Until) out.push_back(static_cast<int>(i));
    return out;
  }

 private:
  using Key = std::tuple<Op, std::string, int, int>;
  std::map<Key, int> ids_;
  std::vector<Key> defs_;
};

struct TableauNode {
  std::set<int> incoming;  // -1 denotes the init pseudo-node
  std::set<int> todo;
  std::set<int> old;
  std::set<int> nxt;
};

struct TableauState {
  std::set<int> incoming;
  std::set<int> old;
  std::set<int> nxt;
};

class Tableau {
 public:
  explicit Tableau(Interner& in) : in_(in) {}

  std::vector<TableauState> run(int root) {
    TableauNode init;
    init.incoming.insert(-1);
    init.todo.insert(root);
    expand(std::move(init));
    return std::move(states_);
  }

 private:
  void expand(TableauNode node) {
    if (node.todo.empty()) {
      for (auto& s : states_) {
        if (s.old == node.old && s.nxt == node.nxt) {
          s.incoming.insert(node.incoming.begin(), node.incoming.end());
          return;
        }
      }
      int id = static_cast<int>(states_.size());
      states_.push_back({node.incoming, node.old, node.nxt});
      TableauNode succ;
      succ.incoming.insert(id);
      succ.todo = node.nxt;
      expand(std::move(succ));
      return;
    }

    int eta = *node.todo.begin();
    node.todo.erase(node.todo.begin());
    if (node.old.count(eta)) {
      expand(std::move(node));
      return;
    }

    switch (in_.op(eta)) {
      case Op::False:
        return;  // contradiction: drop the node
      case Op::True:
        // Recorded like a literal: acceptance tests look for an Until's
        // right-hand side in old, and that side may be `true`.
        node.old.insert(eta);
        expand(std::move(node));
        return;
      case Op::Atom:
      case Op::Not: {
        if (contradicts(eta, node.old)) return;
        node.old.insert(eta);
        expand(std::move(node));
        return;
      }
      case Op::And: {
        if (!node.old.count(in_.lhs(eta))) node.todo.insert(in_.lhs(eta));
        if (!node.old.count(in_.rhs(eta))) node.todo.insert(in_.rhs(eta));
        node.old.insert(eta);
        expand(std::move(node));
        return;
      }
      case Op::Or: {
        TableauNode left = node, right = std::move(node);
        left.old.insert(eta);
        right.old.insert(eta);
        if (!left.old.count(in_.lhs(eta))) left.todo.insert(in_.lhs(eta));
        if (!right.old.count(in_.rhs(eta))) right.todo.insert(in_.rhs(eta));
        expand(std::move(left));
        expand(std::move(right));
        return;
      }
      case Op::Next: {
        node.old.insert(eta);
        node.nxt.insert(in_.lhs(eta));
        expand(std::move(node));
        return;
      }
      case Op::Until: {
        TableauNode now = node, later = std::move(node);
        later.old.insert(eta);
        if (!later.old.count(in_.lhs(eta))) later.todo.insert(in_.lhs(eta));
        later.nxt.insert(eta);
        now.old.insert(eta);
        if (!now.old.count(in_.rhs(eta))) now.todo.insert(in_.rhs(eta));
        expand(std::move(now));
        expand(std::move(later));
        return;
      }
      case Op::Release: {
        TableauNode both = node, later = std::move(node);
        both.old.insert(eta);
        if (!both.old.count(in_.lhs(eta))) both.todo.insert(in_.lhs(eta));
        if (!both.old.count(in_.rhs(eta))) both.todo.insert(in_.rhs(eta));
        later.old.insert(eta);
        if (!later.old.count(in_.rhs(eta))) later.todo.insert(in_.rhs(eta));
        later.nxt.insert(eta);
        expand(std::move(both));
        expand(std::move(later));
        return;
      }
      default:
        throw ValidationError("ltl_to_buchi requires an NNF formula");
    }
  }

  bool contradicts(int literal, const std::set<int>& old) const {
    if (in_.op(literal) == Op::Not) return old.count(in_.lhs(literal)) > 0;
    for (int id : old)
      if (in_.op(id) == Op::Not && in_.lhs(id) == literal) return true;
    return false;
  }

  Interner& in_;
  std::vector<TableauState> states_;
};

}  // namespace

BuchiAutomaton ltl_to_buchi(const FormulaPtr& nnf) {
  if (!is_nnf(nnf)) throw ValidationError("ltl_to_buchi requires an NNF formula");
  FormulaPtr rewritten = rewrite_fg(nnf);

  Interner interner;
  int root = interner.intern(rewritten);

  Tableau tableau(interner);
  std::vector<TableauState> states = tableau.run(root);

  BuchiAutomaton a;
  a.num_states = static_cast<int>(states.size());
  a.edges.assign(a.num_states, {});

  for (int q = 0; q < a.num_states; ++q) {
    BuchiAutomaton::Edge onto;
    onto.to = q;
    for (int id : states[q].old) {
      if (interner.op(id) == Op::Atom) onto.pos.push_back(interner.atom(id));
      if (interner.op(id) == Op::Not) onto.neg.push_back(interner.atom(interner.lhs(id)));
    }
    std::sort(onto.pos.begin(), onto.pos.end());
    std::sort(onto.neg.begin(), onto.neg.end());
    for (int from : states[q].incoming) {
      if (from == -1) a.initial.push_back(onto);
      else a.edges[from].push_back(onto);
    }
  }
  auto by_target = [](const BuchiAutomaton::Edge& x, const BuchiAutomaton::Edge& y) {
    return x.to < y.to;
  };
  for (auto& es : a.edges) std::sort(es.begin(), es.end(), by_target);
  std::sort(a.initial.begin(), a.initial.end(), by_target);

  for (int u : interner.untils()) {
    std::vector<int> set;
    int g = interner.rhs(u);
    for (int q = 0; q < a.num_states; ++q)
      if (!states[q].old.count(u) || states[q].old.count(g)) set.push_back(q);
    a.acceptance.push_back(std::move(set));
  }
  if (a.acceptance.empty()) {
    std::vector<int> all(a.num_states);
    for (int q = 0; q < a.num_states; ++q) all[q] = q;
    a.acceptance.push_back(std::move(all));
  }
  return a;
}

}  // namespace fsmsynth
