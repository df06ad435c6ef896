#include "fsmsynth/machine.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

namespace fsmsynth {

void sort_transitions(std::vector<Transition>& transitions) {
  std::sort(transitions.begin(), transitions.end(), [](const Transition& a, const Transition& b) {
    return std::tie(a.source, a.event, a.guard, a.target, a.actions) <
           std::tie(b.source, b.event, b.guard, b.target, b.actions);
  });
}

std::vector<Transition> sorted_transitions(const Fsm& m) {
  std::vector<Transition> ts = m.transitions;
  sort_transitions(ts);
  return ts;
}

bool Fsm::operator==(const Fsm& other) const {
  return size == other.size && initial == other.initial && alphabet == other.alphabet &&
         sorted_transitions(*this) == sorted_transitions(other);
}

std::vector<std::string> validate_fsm(const Fsm& m) {
  std::vector<std::string> violations;
  if (m.size < 1) violations.push_back("machine must have at least one state");
  if (m.initial < 0 || m.initial >= m.size)
    violations.push_back("initial state " + std::to_string(m.initial) + " out of range");

  std::map<std::tuple<int, std::string, GuardExpr>, int> keys;
  for (const Transition& t : m.transitions) {
    if (t.source < 0 || t.source >= m.size)
      violations.push_back("transition source " + std::to_string(t.source) + " out of range");
    if (t.target < 0 || t.target >= m.size)
      violations.push_back("transition target " + std::to_string(t.target) + " out of range");
    if (!m.alphabet.is_event(t.event))
      violations.push_back("undeclared event '" + t.event + "'");
    if (!t.guard.is_true() && !m.alphabet.is_guard(t.guard.name()))
      violations.push_back("undeclared guard '" + t.guard.name() + "'");
    for (const auto& a : t.actions)
      if (!m.alphabet.is_action(a)) violations.push_back("undeclared action '" + a + "'");
    if (++keys[{t.source, t.event, t.guard}] == 2)
      violations.push_back("duplicate transition key (" + std::to_string(t.source) + ", " +
                           t.event + ", " + t.guard.str() + ")");
  }

  if (violations.empty()) {
    // Reachability over valid ids only.
    std::vector<char> seen(m.size, 0);
    std::vector<int> stack{m.initial};
    seen[m.initial] = 1;
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      for (const Transition& t : m.transitions)
        if (t.source == s && !seen[t.target]) {
          seen[t.target] = 1;
          stack.push_back(t.target);
        }
    }
    for (int s = 0; s < m.size; ++s)
      if (!seen[s]) violations.push_back("state " + std::to_string(s) + " unreachable");
  }
  return violations;
}

std::string KripkeStructure::node_name(int id) const {
  if (id == sink_id) return std::string(kEndLabel);
  return "t" + std::to_string(id);
}

KripkeStructure build_kripke(const Fsm& m) {
  auto violations = validate_fsm(m);
  if (!violations.empty())
    throw ValidationError("invalid machine: " + violations.front());

  KripkeStructure k;
  std::vector<Transition> ts = sorted_transitions(m);
  for (const Transition& t : ts) k.nodes.push_back({false, t});

  std::vector<char> has_outgoing(m.size, 0);
  for (const Transition& t : ts) has_outgoing[t.source] = 1;

  bool need_sink = !has_outgoing[m.initial];
  for (const Transition& t : ts)
    if (!has_outgoing[t.target]) need_sink = true;
  if (need_sink) {
    k.sink_id = static_cast<int>(k.nodes.size());
    k.nodes.push_back({true, {}});
  }

  int n = static_cast<int>(k.nodes.size());
  k.succ.assign(n, {});
  k.labels.assign(n, {});

  for (int i = 0; i < n; ++i) {
    if (k.nodes[i].sink) {
      k.labels[i].insert(std::string(kEndLabel));
      k.succ[i].push_back(i);
      continue;
    }
    const Transition& t = k.nodes[i].transition;
    k.labels[i].insert(t.event);
    if (t.guard.is_positive_var()) k.labels[i].insert(t.guard.name());
    for (const auto& a : t.actions) k.labels[i].insert(a);

    if (!has_outgoing[t.target]) {
      k.succ[i].push_back(k.sink_id);
    } else {
      for (int j = 0; j < n; ++j)
        if (!k.nodes[j].sink && k.nodes[j].transition.source == t.target)
          k.succ[i].push_back(j);
    }

    if (t.source == m.initial) k.initial.push_back(i);
  }
  if (!has_outgoing[m.initial]) k.initial.push_back(k.sink_id);
  return k;
}

std::string ConformanceResult::describe() const {
  switch (status) {
    case Status::Conforms: return "CONFORMS";
    case Status::NoTransition: return "FAILS step=" + std::to_string(step) + " reason=no-transition";
    case Status::ActionMismatch:
      return "FAILS step=" + std::to_string(step) + " reason=action-mismatch";
  }
  return {};
}

ConformanceResult run_scenario(const Fsm& m, const Scenario& s) {
  int state = m.initial;
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const ScenarioStep& step = s.steps[i];
    const Transition* match = nullptr;
    for (const Transition& t : m.transitions)
      if (t.source == state && t.event == step.event && t.guard == step.guard) {
        match = &t;
        break;
      }
    if (!match) return {ConformanceResult::Status::NoTransition, i};
    if (match->actions != step.actions) return {ConformanceResult::Status::ActionMismatch, i};
    state = match->target;
  }
  return {};
}

std::string export_dot(const Fsm& m) {
  std::ostringstream out;
  out << "digraph fsm {\n";
  out << "  rankdir=LR;\n";
  out << "  __init [shape=point, label=\"\"];\n";
  for (int s = 0; s < m.size; ++s)
    out << "  " << s << " [shape=circle];\n";
  out << "  __init -> " << m.initial << ";\n";
  for (const Transition& t : sorted_transitions(m)) {
    out << "  " << t.source << " -> " << t.target << " [label=\"" << t.event;
    if (!t.guard.is_true()) out << " [" << t.guard.str() << "]";
    out << " / ";
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
      if (i) out << ", ";
      out << t.actions[i];
    }
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_json(const Fsm& m) {
  nlohmann::ordered_json doc;
  doc["size"] = m.size;
  doc["initial"] = m.initial;
  doc["alphabet"] = {{"events", m.alphabet.events()},
                     {"actions", m.alphabet.actions()},
                     {"guards", m.alphabet.guards()}};
  doc["transitions"] = nlohmann::ordered_json::array();
  for (const Transition& t : sorted_transitions(m)) {
    doc["transitions"].push_back({{"source", t.source},
                                  {"event", t.event},
                                  {"guard", t.guard.str()},
                                  {"actions", t.actions},
                                  {"target", t.target}});
  }
  return doc.dump(2) + "\n";
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw ValidationError("fsm json: " + path + ": " + message);
}

template <typename T>
T require(const nlohmann::json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) schema_error(path + "." + key, "missing");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    schema_error(path + "." + key, "wrong type");
  }
}

}  // namespace

Fsm from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("fsm json: ") + e.what());
  }
  if (!doc.is_object()) schema_error("$", "expected an object");

  Fsm m;
  m.size = require<int>(doc, "$", "size");
  m.initial = require<int>(doc, "$", "initial");
  if (!doc.contains("alphabet") || !doc["alphabet"].is_object())
    schema_error("$.alphabet", "missing or not an object");
  auto events = require<std::vector<std::string>>(doc["alphabet"], "$.alphabet", "events");
  auto actions = require<std::vector<std::string>>(doc["alphabet"], "$.alphabet", "actions");
  auto guards = require<std::vector<std::string>>(doc["alphabet"], "$.alphabet", "guards");
  try {
    // make() only appends implicit aliases that are missing, so a serialized
    // alphabet (which already lists them) round-trips verbatim.
    m.alphabet = Alphabet::make(events, actions, guards);
  } catch (const ValidationError& e) {
    schema_error("$.alphabet", e.what());
  }

  if (!doc.contains("transitions") || !doc["transitions"].is_array())
    schema_error("$.transitions", "missing or not an array");
  int idx = 0;
  for (const auto& item : doc["transitions"]) {
    std::string path = "$.transitions[" + std::to_string(idx++) + "]";
    if (!item.is_object()) schema_error(path, "expected an object");
    Transition t;
    t.source = require<int>(item, path, "source");
    t.event = require<std::string>(item, path, "event");
    std::string guard = require<std::string>(item, path, "guard");
    try {
      t.guard = GuardExpr::parse(guard);
    } catch (const ValidationError& e) {
      schema_error(path + ".guard", e.what());
    }
    t.actions = require<std::vector<std::string>>(item, path, "actions");
    t.target = require<int>(item, path, "target");
    m.transitions.push_back(std::move(t));
  }
  return m;
}

}  // namespace fsmsynth
