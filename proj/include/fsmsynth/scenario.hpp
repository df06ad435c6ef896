#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsmsynth/alphabet.hpp"

namespace fsmsynth {

/// One scenario step: the event received, the guard that held, and the
/// action sequence the machine must emit.
struct ScenarioStep {
  std::string event;
  GuardExpr guard;
  std::vector<std::string> actions;

  auto operator<=>(const ScenarioStep&) const = default;
};

struct Scenario {
  std::vector<ScenarioStep> steps;

  auto operator<=>(const Scenario&) const = default;
};

/// Parses scenario text: one scenario per line, steps separated by ';'.
/// Step syntax: event[guard]/a1,a2 with both suffixes optional; an omitted
/// or empty action list means the event's implicit action. A trailing
/// `xN` token repeats the step N times.
std::vector<Scenario> parse_scenarios(std::string_view text, const Alphabet& alphabet);

/// Prefix tree of a scenario set. Node 0 is the root; scenarios sharing a
/// step prefix share the corresponding path.
struct ScenarioTree {
  struct Edge {
    std::string event;
    GuardExpr guard;
    std::vector<std::string> actions;
    int child;
  };

  std::vector<std::vector<Edge>> children{1};  // index 0 = root

  int node_count() const { return static_cast<int>(children.size()); }
  int edge_count() const { return node_count() - 1; }
};

/// Merges scenarios into a prefix tree. Two scenarios that agree on
/// (event, guard) along a shared prefix but disagree on actions are a
/// consistency error (synthesis targets deterministic machines).
ScenarioTree build_scenario_tree(const std::vector<Scenario>& scenarios);

/// Parsed .scn file. The alphabet header is optional; when absent, the
/// caller must supply the alphabet.
struct ScenarioFile {
  Alphabet alphabet;
  std::vector<Scenario> scenarios;
};

ScenarioFile load_scn_file(std::string_view text, const std::optional<Alphabet>& external = {});

}  // namespace fsmsynth
