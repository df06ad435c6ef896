#include "fsmsynth/scenario.hpp"

#include <algorithm>
#include <cctype>

#include "fsmsynth/ltl.hpp"

namespace fsmsynth {

namespace {

class StepLexer {
 public:
  StepLexer(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

  void skip_ws() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= line_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < line_.size() ? line_[pos_] : '\0';
  }

  void consume(char c, const char* what) {
    skip_ws();
    if (pos_ >= line_.size() || line_[pos_] != c) fail(std::string("expected ") + what);
    ++pos_;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < line_.size() &&
           (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail("expected an identifier");
    std::string word(line_.substr(start, pos_ - start));
    if (!is_identifier(word)) fail("invalid identifier '" + word + "'");
    return word;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, {line_no_, static_cast<int>(pos_) + 1, pos_});
  }

  int column() const { return static_cast<int>(pos_) + 1; }

 private:
  std::string_view line_;
  int line_no_;
  std::size_t pos_ = 0;
};

// A step token `xN` (N digits) that is not a declared name is a repetition
// count for the preceding step.
std::optional<int> repetition_count(const std::string& word, const Alphabet& alphabet) {
  if (word.size() < 2 || word[0] != 'x') return std::nullopt;
  if (!std::all_of(word.begin() + 1, word.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return std::nullopt;
  if (alphabet.contains(word)) return std::nullopt;
  return std::stoi(word.substr(1));
}

Scenario parse_scenario_line(std::string_view line, int line_no, const Alphabet& alphabet) {
  Scenario scenario;
  StepLexer lex(line, line_no);
  while (!lex.at_end()) {
    ScenarioStep step;
    int event_col = lex.column();
    step.event = lex.ident();
    if (!alphabet.is_event(step.event))
      throw ParseError("unknown event '" + step.event + "'",
                       {line_no, event_col, static_cast<std::size_t>(event_col - 1)});

    if (lex.peek() == '[') {
      lex.consume('[', "'['");
      bool negated = false;
      if (lex.peek() == '!') {
        lex.consume('!', "'!'");
        negated = true;
      }
      int guard_col = lex.column();
      std::string name = lex.ident();
      lex.consume(']', "']'");
      if (name == "true" && !negated) {
        step.guard = GuardExpr::always();
      } else {
        if (!alphabet.is_guard(name))
          throw ParseError("unknown guard '" + name + "'",
                           {line_no, guard_col, static_cast<std::size_t>(guard_col - 1)});
        step.guard = negated ? GuardExpr::not_var(name) : GuardExpr::var(name);
      }
    }

    int repeat = 1;
    if (lex.peek() == '/') {
      lex.consume('/', "'/'");
      bool saw_rep = false;
      while (!lex.at_end() && lex.peek() != ';') {
        int col = lex.column();
        std::string name = lex.ident();
        if (auto rep = repetition_count(name, alphabet)) {
          repeat = *rep;
          saw_rep = true;
          break;
        }
        auto resolved = alphabet.resolve_action(name);
        if (!resolved)
          throw ParseError("unknown action '" + name + "'",
                           {line_no, col, static_cast<std::size_t>(col - 1)});
        step.actions.push_back(*resolved);
        if (lex.peek() == ',') lex.consume(',', "','");
        else break;
      }
      if (!saw_rep && !lex.at_end() && lex.peek() != ';') {
        int col = lex.column();
        std::string word = lex.ident();
        auto rep = repetition_count(word, alphabet);
        if (!rep)
          throw ParseError("expected ';' or a repetition count, found '" + word + "'",
                           {line_no, col, static_cast<std::size_t>(col - 1)});
        repeat = *rep;
      }
    } else if (!lex.at_end() && lex.peek() != ';') {
      int col = lex.column();
      std::string word = lex.ident();
      auto rep = repetition_count(word, alphabet);
      if (!rep)
        throw ParseError("expected ';', '/' or a repetition count, found '" + word + "'",
                         {line_no, col, static_cast<std::size_t>(col - 1)});
      repeat = *rep;
    }

    // ". " in the paper: an omitted action list stands for the single
    // implicit action named after the event.
    if (step.actions.empty()) step.actions.push_back(alphabet.implicit_action(step.event));
    if (repeat < 1)
      throw ParseError("repetition count must be at least 1",
                       {line_no, lex.column(), static_cast<std::size_t>(lex.column() - 1)});
    for (int k = 0; k < repeat; ++k) scenario.steps.push_back(step);

    if (lex.peek() == ';') lex.consume(';', "';'");
    else break;
  }
  if (!lex.at_end()) lex.fail("trailing input after scenario");
  return scenario;
}

}  // namespace

std::vector<Scenario> parse_scenarios(std::string_view text, const Alphabet& alphabet) {
  std::vector<Scenario> out;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = strip_comment(lines[i]);
    if (std::all_of(line.begin(), line.end(),
                    [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
      continue;
    out.push_back(parse_scenario_line(line, static_cast<int>(i + 1), alphabet));
  }
  return out;
}

ScenarioTree build_scenario_tree(const std::vector<Scenario>& scenarios) {
  ScenarioTree tree;
  // Remember which scenario first created each edge for error reporting.
  std::vector<std::vector<std::size_t>> edge_origin{{}};

  for (std::size_t si = 0; si < scenarios.size(); ++si) {
    int node = 0;
    for (const ScenarioStep& step : scenarios[si].steps) {
      auto& edges = tree.children[node];
      auto it = std::find_if(edges.begin(), edges.end(), [&step](const ScenarioTree::Edge& e) {
        return e.event == step.event && e.guard == step.guard;
      });
      if (it != edges.end()) {
        if (it->actions != step.actions) {
          std::size_t other = edge_origin[node][it - edges.begin()];
          throw ValidationError(
              "scenarios " + std::to_string(other + 1) + " and " + std::to_string(si + 1) +
              " share the prefix up to event '" + step.event +
              "' but disagree on its output actions");
        }
        node = it->child;
        continue;
      }
      int child = tree.node_count();
      tree.children.emplace_back();  // invalidates `edges`
      edge_origin.emplace_back();
      tree.children[node].push_back({step.event, step.guard, step.actions, child});
      edge_origin[node].push_back(si);
      node = child;
    }
  }
  return tree;
}

ScenarioFile load_scn_file(std::string_view text, const std::optional<Alphabet>& external) {
  auto lines = split_lines(text);
  AlphabetHeader header = parse_alphabet_header(lines);

  ScenarioFile out;
  if (header.present) {
    if (external && !(header.alphabet == *external))
      throw ValidationError(
          "scenario file declares an alphabet different from the one supplied");
    out.alphabet = header.alphabet;
  } else if (external) {
    out.alphabet = *external;
  } else {
    throw ParseError("scenario file has no alphabet header and none was supplied", {1, 1, 0});
  }

  for (std::size_t i = header.body_start; i < lines.size(); ++i) {
    std::string line = strip_comment(lines[i]);
    if (std::all_of(line.begin(), line.end(),
                    [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
      continue;
    out.scenarios.push_back(parse_scenario_line(line, static_cast<int>(i + 1), out.alphabet));
  }
  return out;
}

}  // namespace fsmsynth
