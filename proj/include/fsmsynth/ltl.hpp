#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fsmsynth/alphabet.hpp"

namespace fsmsynth {

enum class Op {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Next,
  Globally,
  Future,
  Until,
  Release,
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable LTL formula tree. Shared subtrees are fine; nothing mutates
/// a node after construction.
class Formula {
 public:
  Op op() const { return op_; }
  const std::string& atom_name() const { return atom_; }
  const FormulaPtr& lhs() const { return lhs_; }
  const FormulaPtr& rhs() const { return rhs_; }

  static FormulaPtr tru();
  static FormulaPtr fls();
  static FormulaPtr atom(std::string name);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr disj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr implies(FormulaPtr l, FormulaPtr r);
  static FormulaPtr next(FormulaPtr f);
  static FormulaPtr globally(FormulaPtr f);
  static FormulaPtr future(FormulaPtr f);
  static FormulaPtr until(FormulaPtr l, FormulaPtr r);
  static FormulaPtr release(FormulaPtr l, FormulaPtr r);

 private:
  Formula(Op op, std::string atom, FormulaPtr lhs, FormulaPtr rhs)
      : op_(op), atom_(std::move(atom)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

  Op op_;
  std::string atom_;
  FormulaPtr lhs_;
  FormulaPtr rhs_;
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);

/// Concrete-syntax rendering; parse_ltl(to_string(f), ...) == f.
std::string to_string(const FormulaPtr& f);

std::set<std::string> atoms_of(const FormulaPtr& f);

/// Negation normal form: Implies eliminated, Not pushed onto atoms via the
/// temporal and De Morgan dualities.
FormulaPtr to_nnf(const FormulaPtr& f);

bool is_nnf(const FormulaPtr& f);

/// Ultimately periodic word prefix . loop^w over sets of atom names.
struct Lasso {
  std::vector<std::set<std::string>> prefix;
  std::vector<std::set<std::string>> loop;  // nonempty

  std::size_t length() const { return prefix.size() + loop.size(); }
  const std::set<std::string>& at(std::size_t pos) const;
  std::size_t next(std::size_t pos) const;
};

/// Truth of f at position 0 of the infinite word. Temporal operators are
/// resolved as fixpoints over the folded position space.
bool eval_on_lasso(const FormulaPtr& f, const Lasso& w);

/// Parses one formula. Atoms must name members of the alphabet; END and the
/// operator keywords are reserved. Throws ParseError with a byte offset.
FormulaPtr parse_ltl(std::string_view text, const Alphabet& alphabet);

/// Parsed .ltl file: alphabet header plus one formula per line.
struct LtlFile {
  Alphabet alphabet;
  std::vector<FormulaPtr> formulas;
  std::vector<std::string> sources;  // formula text as written, one per formula
};

LtlFile load_ltl_file(std::string_view text);

/// Alphabet header shared by .ltl and .scn files: `events:`, `actions:`,
/// `guards:` lines before any other content. Returns the first line index
/// after the header. Lines are the file split on '\n'.
struct AlphabetHeader {
  bool present = false;
  Alphabet alphabet;
  std::size_t body_start = 0;
};

AlphabetHeader parse_alphabet_header(const std::vector<std::string>& lines);

std::vector<std::string> split_lines(std::string_view text);
std::string strip_comment(std::string_view line);

}  // namespace fsmsynth
