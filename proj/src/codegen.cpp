#include "fsmsynth/codegen.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "fsmsynth/ltl.hpp"

namespace fsmsynth {

const std::string* ContractDef::find_predicate(std::string_view guard) const {
  for (const auto& [name, body] : predicates)
    if (name == guard) return &body;
  return nullptr;
}

const std::string* ContractDef::find_action(std::string_view action) const {
  for (const auto& [name, body] : actions)
    if (name == action) return &body;
  return nullptr;
}

namespace {

std::string trim_view(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Section {
  std::string keyword;
  std::string argument;
  int line;
  std::vector<std::string> body;
};

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    std::string trimmed = trim_view(line);
    int line_no = static_cast<int>(i + 1);
    if (!trimmed.empty() && trimmed.front() == '[') {
      if (trimmed.back() != ']')
        throw ParseError("unterminated section header", {line_no, 1, 0});
      std::string inner = trim_view(trimmed.substr(1, trimmed.size() - 2));
      std::size_t space = inner.find_first_of(" \t");
      Section s;
      s.keyword = space == std::string::npos ? inner : inner.substr(0, space);
      s.argument = space == std::string::npos ? "" : trim_view(inner.substr(space + 1));
      s.line = line_no;
      sections.push_back(std::move(s));
      continue;
    }
    if (sections.empty()) {
      if (!trimmed.empty() && trimmed.front() != '#')
        throw ParseError("content before the first section header", {line_no, 1, 0});
      continue;
    }
    sections.back().body.push_back(line);
  }
  return sections;
}

// Body lines joined verbatim; trailing blank lines dropped so a section
// separated from the next by whitespace round-trips cleanly.
std::string join_body(const std::vector<std::string>& body) {
  std::size_t end = body.size();
  while (end > 0 && trim_view(body[end - 1]).empty()) --end;
  std::string out;
  for (std::size_t i = 0; i < end; ++i) {
    out += body[i];
    out += '\n';
  }
  if (!out.empty()) out.pop_back();
  return out;
}

}  // namespace

ContractDef parse_contract_def(std::string_view text) {
  ContractDef def;
  bool saw_contract = false, saw_header = false, saw_state = false, saw_payable = false;

  for (const Section& s : split_sections(text)) {
    SourcePos pos{s.line, 1, 0};
    if (s.keyword == "contract") {
      if (saw_contract) throw ParseError("duplicate [contract] section", pos);
      if (!is_identifier(s.argument))
        throw ParseError("contract name '" + s.argument + "' is not an identifier", pos);
      saw_contract = true;
      def.name = s.argument;
      if (!join_body(s.body).empty())
        throw ParseError("[contract] section takes no body", pos);
    } else if (s.keyword == "header") {
      if (saw_header) throw ParseError("duplicate [header] section", pos);
      saw_header = true;
      def.header = join_body(s.body);
    } else if (s.keyword == "state") {
      if (saw_state) throw ParseError("duplicate [state] section", pos);
      saw_state = true;
      def.state_decl = join_body(s.body);
    } else if (s.keyword == "predicate") {
      if (!is_identifier(s.argument))
        throw ParseError("predicate name '" + s.argument + "' is not an identifier", pos);
      if (def.find_predicate(s.argument))
        throw ParseError("duplicate [predicate " + s.argument + "] section", pos);
      def.predicates.emplace_back(s.argument, join_body(s.body));
    } else if (s.keyword == "action") {
      if (!is_identifier(s.argument))
        throw ParseError("action name '" + s.argument + "' is not an identifier", pos);
      if (def.find_action(s.argument))
        throw ParseError("duplicate [action " + s.argument + "] section", pos);
      def.actions.emplace_back(s.argument, join_body(s.body));
    } else if (s.keyword == "payable") {
      if (saw_payable) throw ParseError("duplicate [payable] section", pos);
      saw_payable = true;
      std::string arg = s.argument;
      std::size_t start = 0;
      while (start <= arg.size()) {
        std::size_t comma = arg.find(',', start);
        std::string item = trim_view(comma == std::string::npos ? arg.substr(start)
                                                                : arg.substr(start, comma - start));
        if (!item.empty()) {
          if (!is_identifier(item))
            throw ParseError("payable entry '" + item + "' is not an identifier", pos);
          def.payable.push_back(item);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (!join_body(s.body).empty())
        throw ParseError("[payable] section takes no body", pos);
    } else {
      throw ParseError("unknown section [" + s.keyword + "]", pos);
    }
  }

  if (!saw_contract) throw ParseError("missing [contract <Name>] section", {1, 1, 0});
  return def;
}

namespace {

void append_block(std::string& out, const std::string& block) {
  if (block.empty()) return;
  out += block;
  out += '\n';
}

}  // namespace

GeneratedContract generate_contract(const Fsm& m, const ContractDef& def) {
  auto violations = validate_fsm(m);
  if (!violations.empty())
    throw ValidationError("invalid machine: " + violations.front());

  // Resolve the machine's action names against the definition, accepting
  // the event name as an alias for its implicit action.
  std::set<std::string> used_actions, used_guards, used_events;
  for (const Transition& t : m.transitions) {
    used_events.insert(t.event);
    if (!t.guard.is_true()) used_guards.insert(t.guard.name());
    for (const auto& a : t.actions) used_actions.insert(a);
  }
  for (const auto& g : used_guards)
    if (!def.find_predicate(g))
      throw ValidationError("contract definition lacks a predicate for guard '" + g + "'");

  auto body_of_action = [&](const std::string& action) -> const std::string& {
    if (const std::string* body = def.find_action(action)) return *body;
    for (const auto& e : m.alphabet.events())
      if (m.alphabet.implicit_action(e) == action)
        if (const std::string* body = def.find_action(e)) return *body;
    throw ValidationError("contract definition lacks a body for action '" + action + "'");
  };
  for (const auto& a : used_actions) body_of_action(a);  // coverage check up front

  for (const auto& p : def.payable)
    if (!m.alphabet.is_event(p))
      throw ValidationError("payable entry '" + p + "' is not a declared event");

  GeneratedContract out;
  std::string& src = out.source;

  append_block(src, def.header);
  if (!def.header.empty()) src += '\n';
  src += "contract " + def.name + " {\n";

  src += "    enum State { ";
  for (int s = 0; s < m.size; ++s) {
    if (s) src += ", ";
    src += "S" + std::to_string(s);
  }
  src += " }\n";
  src += "    State private state = State.S" + std::to_string(m.initial) + ";\n";
  if (!def.state_decl.empty()) {
    src += '\n';
    append_block(src, def.state_decl);
  }

  for (const auto& [guard, body] : def.predicates) {
    src += "\n    function " + guard + "() internal view returns (bool) {\n";
    append_block(src, body);
    src += "    }\n";
  }

  // One method per event, in alphabet order; branches per transition,
  // ordered by (source, guard).
  for (const auto& event : m.alphabet.events()) {
    std::vector<ManifestBranch> branches;
    for (const Transition& t : m.transitions)
      if (t.event == event) branches.push_back({t.source, t.guard, t.actions, t.target});
    if (branches.empty()) continue;
    std::sort(branches.begin(), branches.end(),
              [](const ManifestBranch& a, const ManifestBranch& b) {
                return std::tie(a.source, a.guard) < std::tie(b.source, b.guard);
              });

    bool payable =
        std::find(def.payable.begin(), def.payable.end(), event) != def.payable.end();
    src += "\n    function " + event + "() public" + (payable ? " payable" : "") + " {\n";
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const ManifestBranch& b = branches[i];
      std::string cond = "state == State.S" + std::to_string(b.source);
      if (b.guard.is_positive_var()) cond += " && " + b.guard.name() + "()";
      if (b.guard.is_negated_var()) cond += " && !" + b.guard.name() + "()";
      src += i == 0 ? "        if (" : "        } else if (";
      src += cond + ") {\n";
      for (const auto& action : b.actions) append_block(src, body_of_action(action));
      src += "            state = State.S" + std::to_string(b.target) + ";\n";
    }
    src += "        } else {\n";
    src += "            revert();\n";
    src += "        }\n";
    src += "    }\n";

    out.manifest.emplace_back(event, std::move(branches));
  }

  src += "}\n";
  return out;
}

}  // namespace fsmsynth
