#pragma once

#include <random>
#include <vector>

#include "fsmsynth/ltl.hpp"
#include "fsmsynth/machine.hpp"

// Seeded random inputs for property tests. All generators are deterministic
// functions of the engine state.
namespace testgen {

using fsmsynth::Formula;
using fsmsynth::FormulaPtr;

inline FormulaPtr random_formula(std::mt19937& rng, const std::vector<std::string>& atoms,
                                 int depth) {
  std::uniform_int_distribution<int> op_dist(0, depth <= 0 ? 2 : 11);
  switch (op_dist(rng)) {
    case 0:
    case 1: {
      std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
      return Formula::atom(atoms[pick(rng)]);
    }
    case 2:
      return rng() % 2 ? Formula::tru() : Formula::fls();
    case 3:
      return Formula::negation(random_formula(rng, atoms, depth - 1));
    case 4:
      return Formula::conj(random_formula(rng, atoms, depth - 1),
                           random_formula(rng, atoms, depth - 1));
    case 5:
      return Formula::disj(random_formula(rng, atoms, depth - 1),
                           random_formula(rng, atoms, depth - 1));
    case 6:
      return Formula::implies(random_formula(rng, atoms, depth - 1),
                              random_formula(rng, atoms, depth - 1));
    case 7:
      return Formula::next(random_formula(rng, atoms, depth - 1));
    case 8:
      return Formula::globally(random_formula(rng, atoms, depth - 1));
    case 9:
      return Formula::future(random_formula(rng, atoms, depth - 1));
    case 10:
      return Formula::until(random_formula(rng, atoms, depth - 1),
                            random_formula(rng, atoms, depth - 1));
    default:
      return Formula::release(random_formula(rng, atoms, depth - 1),
                              random_formula(rng, atoms, depth - 1));
  }
}

inline std::set<std::string> random_letter(std::mt19937& rng,
                                           const std::vector<std::string>& atoms) {
  std::set<std::string> letter;
  for (const auto& a : atoms)
    if (rng() % 2) letter.insert(a);
  return letter;
}

inline fsmsynth::Lasso random_lasso(std::mt19937& rng, const std::vector<std::string>& atoms,
                                    int max_total) {
  std::uniform_int_distribution<int> loop_dist(1, max_total);
  int loop_len = loop_dist(rng);
  std::uniform_int_distribution<int> prefix_dist(0, max_total - loop_len);
  int prefix_len = prefix_dist(rng);
  fsmsynth::Lasso w;
  for (int i = 0; i < prefix_len; ++i) w.prefix.push_back(random_letter(rng, atoms));
  for (int i = 0; i < loop_len; ++i) w.loop.push_back(random_letter(rng, atoms));
  return w;
}

/// Random machine over guardless events, every state reachable by
/// construction (each state > 0 gets an incoming transition from a smaller
/// one first).
inline fsmsynth::Fsm random_machine(std::mt19937& rng, int max_states,
                                    const std::vector<std::string>& events) {
  std::uniform_int_distribution<int> size_dist(1, max_states);
  fsmsynth::Fsm m;
  m.size = size_dist(rng);
  m.alphabet = fsmsynth::Alphabet::make(events, {}, {});

  auto taken = [&](int source, const std::string& event) {
    for (const auto& t : m.transitions)
      if (t.source == source && t.event == event) return true;
    return false;
  };
  auto add = [&](int source, const std::string& event, int target) {
    if (taken(source, event)) return false;
    m.transitions.push_back({source, event, fsmsynth::GuardExpr::always(), {}, target});
    return true;
  };

  // Spine first so every state is reachable; fall back to the first free
  // slot when the random pick is taken.
  for (int s = 1; s < m.size; ++s) {
    std::uniform_int_distribution<int> src(0, s - 1);
    std::uniform_int_distribution<std::size_t> ev(0, events.size() - 1);
    if (add(src(rng), events[ev(rng)], s)) continue;
    bool placed = false;
    for (int source = 0; source < s && !placed; ++source)
      for (const auto& event : events)
        if (add(source, event, s)) {
          placed = true;
          break;
        }
  }
  std::uniform_int_distribution<int> extra_dist(0, 2 * m.size);
  int extra = extra_dist(rng);
  for (int i = 0; i < extra; ++i) {
    std::uniform_int_distribution<int> st(0, m.size - 1);
    std::uniform_int_distribution<std::size_t> ev(0, events.size() - 1);
    add(st(rng), events[ev(rng)], st(rng));
  }
  fsmsynth::sort_transitions(m.transitions);
  return m;
}

}  // namespace testgen
