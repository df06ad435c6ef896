#include "fsmsynth/ltl.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <functional>

namespace fsmsynth {

// --- construction ---------------------------------------------------------

FormulaPtr Formula::tru() { return FormulaPtr(new Formula(Op::True, {}, nullptr, nullptr)); }
FormulaPtr Formula::fls() { return FormulaPtr(new Formula(Op::False, {}, nullptr, nullptr)); }

FormulaPtr Formula::atom(std::string name) {
  return FormulaPtr(new Formula(Op::Atom, std::move(name), nullptr, nullptr));
}

FormulaPtr Formula::negation(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::Not, {}, std::move(f), nullptr));
}

FormulaPtr Formula::conj(FormulaPtr l, FormulaPtr r) {
  return FormulaPtr(new Formula(Op::And, {}, std::move(l), std::move(r)));
}

FormulaPtr Formula::disj(FormulaPtr l, FormulaPtr r) {
  return FormulaPtr(new Formula(Op::Or, {}, std::move(l), std::move(r)));
}

FormulaPtr Formula::implies(FormulaPtr l, FormulaPtr r) {
  return FormulaPtr(new Formula(Op::Implies, {}, std::move(l), std::move(r)));
}

FormulaPtr Formula::next(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::Next, {}, std::move(f), nullptr));
}

FormulaPtr Formula::globally(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::Globally, {}, std::move(f), nullptr));
}

FormulaPtr Formula::future(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::Future, {}, std::move(f), nullptr));
}

FormulaPtr Formula::until(FormulaPtr l, FormulaPtr r) {
  return FormulaPtr(new Formula(Op::Until, {}, std::move(l), std::move(r)));
}

FormulaPtr Formula::release(FormulaPtr l, FormulaPtr r) {
  return FormulaPtr(new Formula(Op::Release, {}, std::move(l), std::move(r)));
}

// --- structural equality ---------------------------------------------------

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op() != b->op()) return false;
  if (a->op() == Op::Atom) return a->atom_name() == b->atom_name();
  return equal(a->lhs(), b->lhs()) && equal(a->rhs(), b->rhs());
}

std::set<std::string> atoms_of(const FormulaPtr& f) {
  std::set<std::string> out;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
    if (!g) return;
    if (g->op() == Op::Atom) out.insert(g->atom_name());
    walk(g->lhs());
    walk(g->rhs());
  };
  walk(f);
  return out;
}

// --- printing ---------------------------------------------------------------

namespace {

// Precedence, loosest to tightest: -> (0), || (1), && (2), U/R (3), unary (4),
// primary (5). Matches the parser below.
int precedence(Op op) {
  switch (op) {
    case Op::Implies: return 0;
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Until:
    case Op::Release: return 3;
    case Op::Not:
    case Op::Next:
    case Op::Globally:
    case Op::Future: return 4;
    default: return 5;
  }
}

void print(const FormulaPtr& f, int min_prec, std::string& out) {
  int prec = precedence(f->op());
  bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f->op()) {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Atom: out += f->atom_name(); break;
    case Op::Not:
      out += '!';
      print(f->lhs(), 4, out);
      break;
    case Op::Next:
    case Op::Globally:
    case Op::Future:
      out += f->op() == Op::Next ? "X " : f->op() == Op::Globally ? "G " : "F ";
      print(f->lhs(), 4, out);
      break;
    case Op::And:
      print(f->lhs(), 2, out);
      out += " && ";
      print(f->rhs(), 3, out);
      break;
    case Op::Or:
      print(f->lhs(), 1, out);
      out += " || ";
      print(f->rhs(), 2, out);
      break;
    case Op::Implies:
      print(f->lhs(), 1, out);
      out += " -> ";
      print(f->rhs(), 0, out);
      break;
    case Op::Until:
    case Op::Release: {
      const char* sym = f->op() == Op::Until ? " U " : " R ";
      print(f->lhs(), 4, out);
      out += sym;
      // Same operator on the right keeps the right-associative chain;
      // anything else at this level must be parenthesized (U/R mixing is a
      // parse error by design).
      bool same = f->rhs()->op() == f->op();
      print(f->rhs(), same ? 3 : 4, out);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

// --- negation normal form ----------------------------------------------------

namespace {

FormulaPtr nnf_pos(const FormulaPtr& f);
FormulaPtr nnf_neg(const FormulaPtr& f);

FormulaPtr nnf_pos(const FormulaPtr& f) {
  switch (f->op()) {
    case Op::True:
    case Op::False:
    case Op::Atom: return f;
    case Op::Not: return nnf_neg(f->lhs());
    case Op::And: return Formula::conj(nnf_pos(f->lhs()), nnf_pos(f->rhs()));
    case Op::Or: return Formula::disj(nnf_pos(f->lhs()), nnf_pos(f->rhs()));
    case Op::Implies: return Formula::disj(nnf_neg(f->lhs()), nnf_pos(f->rhs()));
    case Op::Next: return Formula::next(nnf_pos(f->lhs()));
    case Op::Globally: return Formula::globally(nnf_pos(f->lhs()));
    case Op::Future: return Formula::future(nnf_pos(f->lhs()));
    case Op::Until: return Formula::until(nnf_pos(f->lhs()), nnf_pos(f->rhs()));
    case Op::Release: return Formula::release(nnf_pos(f->lhs()), nnf_pos(f->rhs()));
  }
  return f;
}

FormulaPtr nnf_neg(const FormulaPtr& f) {
  switch (f->op()) {
    case Op::True: return Formula::fls();
    case Op::False: return Formula::tru();
    case Op::Atom: return Formula::negation(f);
    case Op::Not: return nnf_pos(f->lhs());
    case Op::And: return Formula::disj(nnf_neg(f->lhs()), nnf_neg(f->rhs()));
    case Op::Or: return Formula::conj(nnf_neg(f->lhs()), nnf_neg(f->rhs()));
    case Op::Implies: return Formula::conj(nnf_pos(f->lhs()), nnf_neg(f->rhs()));
    case Op::Next: return Formula::next(nnf_neg(f->lhs()));
    case Op::Globally: return Formula::future(nnf_neg(f->lhs()));
    case Op::Future: return Formula::globally(nnf_neg(f->lhs()));
    case Op::Until: return Formula::release(nnf_neg(f->lhs()), nnf_neg(f->rhs()));
    case Op::Release: return Formula::until(nnf_neg(f->lhs()), nnf_neg(f->rhs()));
  }
  return f;
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf_pos(f); }

bool is_nnf(const FormulaPtr& f) {
  if (!f) return true;
  if (f->op() == Op::Implies) return false;
  if (f->op() == Op::Not) return f->lhs()->op() == Op::Atom;
  return is_nnf(f->lhs()) && is_nnf(f->rhs());
}

// --- lasso evaluation --------------------------------------------------------

const std::set<std::string>& Lasso::at(std::size_t pos) const {
  return pos < prefix.size() ? prefix[pos] : loop[pos - prefix.size()];
}

std::size_t Lasso::next(std::size_t pos) const {
  return pos + 1 < length() ? pos + 1 : prefix.size();
}

namespace {

using Vals = std::vector<char>;

// Truth vector of f over the folded positions. Until/Future are least
// fixpoints, Release/Globally greatest; iterating the expansion law to a
// fixed point over at most |positions| sweeps converges for both.
Vals eval_all(const FormulaPtr& f, const Lasso& w) {
  std::size_t n = w.length();
  Vals out(n, 0);
  auto fix = [&](const Vals& a, const Vals& b, bool least, auto step) {
    Vals v(n, least ? 0 : 1);
    for (std::size_t sweep = 0; sweep <= n; ++sweep) {
      bool changed = false;
      for (std::size_t i = n; i-- > 0;) {
        char nv = step(a.empty() ? 0 : a[i], b.empty() ? 0 : b[i], v[w.next(i)]);
        if (nv != v[i]) {
          v[i] = nv;
          changed = true;
        }
      }
      if (!changed) break;
    }
    return v;
  };

  switch (f->op()) {
    case Op::True: std::fill(out.begin(), out.end(), 1); return out;
    case Op::False: return out;
    case Op::Atom:
      for (std::size_t i = 0; i < n; ++i) out[i] = w.at(i).count(f->atom_name()) ? 1 : 0;
      return out;
    case Op::Not: {
      Vals a = eval_all(f->lhs(), w);
      for (std::size_t i = 0; i < n; ++i) out[i] = !a[i];
      return out;
    }
    case Op::And: {
      Vals a = eval_all(f->lhs(), w), b = eval_all(f->rhs(), w);
      for (std::size_t i = 0; i < n; ++i) out[i] = a[i] && b[i];
      return out;
    }
    case Op::Or: {
      Vals a = eval_all(f->lhs(), w), b = eval_all(f->rhs(), w);
      for (std::size_t i = 0; i < n; ++i) out[i] = a[i] || b[i];
      return out;
    }
    case Op::Implies: {
      Vals a = eval_all(f->lhs(), w), b = eval_all(f->rhs(), w);
      for (std::size_t i = 0; i < n; ++i) out[i] = !a[i] || b[i];
      return out;
    }
    case Op::Next: {
      Vals a = eval_all(f->lhs(), w);
      for (std::size_t i = 0; i < n; ++i) out[i] = a[w.next(i)];
      return out;
    }
    case Op::Until: {
      Vals a = eval_all(f->lhs(), w), b = eval_all(f->rhs(), w);
      return fix(a, b, true, [](char fa, char gb, char nxt) -> char { return gb || (fa && nxt); });
    }
    case Op::Release: {
      Vals a = eval_all(f->lhs(), w), b = eval_all(f->rhs(), w);
      return fix(a, b, false, [](char fa, char gb, char nxt) -> char { return gb && (fa || nxt); });
    }
    case Op::Future: {
      Vals a = eval_all(f->lhs(), w);
      return fix(a, {}, true, [](char fa, char, char nxt) -> char { return fa || nxt; });
    }
    case Op::Globally: {
      Vals a = eval_all(f->lhs(), w);
      return fix(a, {}, false, [](char fa, char, char nxt) -> char { return fa && nxt; });
    }
  }
  return out;
}

}  // namespace

bool eval_on_lasso(const FormulaPtr& f, const Lasso& w) {
  if (w.loop.empty()) throw ValidationError("lasso loop must be nonempty");
  return eval_all(f, w)[0] != 0;
}

// --- parser -------------------------------------------------------------------

namespace {

struct Token {
  enum class Type { Ident, True, False, Not, And, Or, Implies, Next, Globally, Future, Until, Release, LParen, RParen, End };
  Type type;
  std::string text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Token::Type::End, "", start};
    char c = text_[pos_];
    if (c == '(') { ++pos_; return {Token::Type::LParen, "(", start}; }
    if (c == ')') { ++pos_; return {Token::Type::RParen, ")", start}; }
    if (c == '!') { ++pos_; return {Token::Type::Not, "!", start}; }
    if (c == '&') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '&') { pos_ += 2; return {Token::Type::And, "&&", start}; }
      throw ParseError("expected '&&'", {0, 0, start});
    }
    if (c == '|') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '|') { pos_ += 2; return {Token::Type::Or, "||", start}; }
      throw ParseError("expected '||'", {0, 0, start});
    }
    if (c == '-') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') { pos_ += 2; return {Token::Type::Implies, "->", start}; }
      throw ParseError("expected '->'", {0, 0, start});
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      std::string word(text_.substr(pos_, end - pos_));
      pos_ = end;
      if (word == "true") return {Token::Type::True, word, start};
      if (word == "false") return {Token::Type::False, word, start};
      if (word == "X") return {Token::Type::Next, word, start};
      if (word == "G") return {Token::Type::Globally, word, start};
      if (word == "F") return {Token::Type::Future, word, start};
      if (word == "U") return {Token::Type::Until, word, start};
      if (word == "R") return {Token::Type::Release, word, start};
      return {Token::Type::Ident, word, start};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", {0, 0, start});
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const Alphabet& alphabet)
      : lexer_(text), alphabet_(alphabet) {
    advance();
  }

  FormulaPtr parse() {
    FormulaPtr f = parse_implies();
    expect(Token::Type::End, "end of formula");
    return f;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  void expect(Token::Type t, const char* what) {
    if (current_.type != t)
      throw ParseError(std::string("expected ") + what + ", found '" + current_.text + "'",
                       {0, 0, current_.offset});
  }

  FormulaPtr parse_implies() {
    FormulaPtr l = parse_or();
    if (current_.type == Token::Type::Implies) {
      advance();
      return Formula::implies(std::move(l), parse_implies());
    }
    return l;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (current_.type == Token::Type::Or) {
      advance();
      f = Formula::disj(std::move(f), parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_until();
    while (current_.type == Token::Type::And) {
      advance();
      f = Formula::conj(std::move(f), parse_until());
    }
    return f;
  }

  // U and R share a level, right-associative; mixing them without
  // parentheses is rejected rather than silently resolved.
  FormulaPtr parse_until() {
    std::vector<FormulaPtr> operands;
    std::vector<Token::Type> ops;
    std::vector<std::size_t> offsets;
    operands.push_back(parse_unary());
    while (current_.type == Token::Type::Until || current_.type == Token::Type::Release) {
      ops.push_back(current_.type);
      offsets.push_back(current_.offset);
      advance();
      operands.push_back(parse_unary());
    }
    if (ops.empty()) return operands[0];
    for (std::size_t i = 1; i < ops.size(); ++i)
      if (ops[i] != ops[0])
        throw ParseError("mixing U and R at the same level requires parentheses",
                         {0, 0, offsets[i]});
    FormulaPtr f = operands.back();
    for (std::size_t i = operands.size() - 1; i-- > 0;) {
      f = ops[0] == Token::Type::Until ? Formula::until(operands[i], std::move(f))
                                       : Formula::release(operands[i], std::move(f));
    }
    return f;
  }

  FormulaPtr parse_unary() {
    switch (current_.type) {
      case Token::Type::Not: advance(); return Formula::negation(parse_unary());
      case Token::Type::Next: advance(); return Formula::next(parse_unary());
      case Token::Type::Globally: advance(); return Formula::globally(parse_unary());
      case Token::Type::Future: advance(); return Formula::future(parse_unary());
      default: return parse_primary();
    }
  }

  FormulaPtr parse_primary() {
    switch (current_.type) {
      case Token::Type::True: advance(); return Formula::tru();
      case Token::Type::False: advance(); return Formula::fls();
      case Token::Type::LParen: {
        advance();
        FormulaPtr f = parse_implies();
        expect(Token::Type::RParen, "')'");
        advance();
        return f;
      }
      case Token::Type::Ident: {
        if (current_.text == kEndLabel)
          throw ParseError("'END' is reserved for the Kripke sink and cannot be used in formulas",
                           {0, 0, current_.offset});
        if (!alphabet_.contains(current_.text))
          throw ParseError("unknown atom '" + current_.text +
                               "' (not a declared event, action or guard)",
                           {0, 0, current_.offset});
        FormulaPtr f = Formula::atom(current_.text);
        advance();
        return f;
      }
      default:
        throw ParseError("expected a formula, found '" +
                             (current_.type == Token::Type::End ? std::string("end of input")
                                                                : current_.text) +
                             "'",
                         {0, 0, current_.offset});
    }
  }

  Lexer lexer_;
  const Alphabet& alphabet_;
  Token current_;
};

}  // namespace

FormulaPtr parse_ltl(std::string_view text, const Alphabet& alphabet) {
  std::string stripped = strip_comment(text);
  bool blank = std::all_of(stripped.begin(), stripped.end(),
                           [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (blank) throw ParseError("empty formula", {0, 0, 0});
  return Parser(stripped, alphabet).parse();
}

// --- file loading -----------------------------------------------------------

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string strip_comment(std::string_view line) {
  std::size_t hash = line.find('#');
  std::string_view kept = hash == std::string_view::npos ? line : line.substr(0, hash);
  return std::string(kept);
}

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(std::string_view s, int line_no) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    std::string item = trim(comma == std::string_view::npos ? s.substr(start)
                                                            : s.substr(start, comma - start));
    if (!item.empty()) {
      if (!is_identifier(item))
        throw ParseError("invalid name '" + item + "' in alphabet header", {line_no, 1, 0});
      names.push_back(std::move(item));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return names;
}

}  // namespace

AlphabetHeader parse_alphabet_header(const std::vector<std::string>& lines) {
  AlphabetHeader out;
  std::vector<std::string> events, actions, guards;
  bool saw_events = false, saw_actions = false, saw_guards = false;
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    std::string line = strip_comment(lines[i]);
    if (is_blank(line)) continue;
    std::string trimmed = trim(line);
    int line_no = static_cast<int>(i + 1);
    auto take = [&](std::string_view key, std::vector<std::string>& dst, bool& seen) {
      if (seen) throw ParseError("duplicate '" + std::string(key) + ":' header line", {line_no, 1, 0});
      seen = true;
      dst = split_list(trimmed.substr(key.size() + 1), line_no);
      out.present = true;
    };
    if (trimmed.rfind("events:", 0) == 0) take("events", events, saw_events);
    else if (trimmed.rfind("actions:", 0) == 0) take("actions", actions, saw_actions);
    else if (trimmed.rfind("guards:", 0) == 0) take("guards", guards, saw_guards);
    else break;
  }
  out.body_start = i;
  if (out.present) out.alphabet = Alphabet::make(events, actions, guards);
  return out;
}

LtlFile load_ltl_file(std::string_view text) {
  auto lines = split_lines(text);
  AlphabetHeader header = parse_alphabet_header(lines);
  if (!header.present)
    throw ParseError("missing alphabet header (events:/actions:/guards: lines)", {1, 1, 0});

  LtlFile out;
  out.alphabet = header.alphabet;
  for (std::size_t i = header.body_start; i < lines.size(); ++i) {
    std::string line = strip_comment(lines[i]);
    if (is_blank(line)) continue;
    try {
      out.formulas.push_back(parse_ltl(line, out.alphabet));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), {static_cast<int>(i + 1),
                                  static_cast<int>(e.where().offset + 1), e.where().offset});
    }
    out.sources.push_back(trim(line));
  }
  return out;
}

}  // namespace fsmsynth
