#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsmsynth/errors.hpp"

namespace fsmsynth {

/// Label reserved for the Kripke sink node; rejected as a declared name.
inline constexpr std::string_view kEndLabel = "END";

bool is_identifier(std::string_view s);
bool is_reserved_word(std::string_view s);

/// The three pairwise-disjoint name universes a specification talks about:
/// input events, output actions and Boolean guard variables.
///
/// Events get an implicit output action named "a_<event>" so that scenario
/// steps written without an explicit action list resolve unambiguously.
class Alphabet {
 public:
  enum class Kind { Event, Action, Guard };

  Alphabet() = default;

  /// Validates identifiers, checks disjointness and appends the implicit
  /// "a_<event>" aliases to the action set. Throws ValidationError.
  static Alphabet make(std::vector<std::string> events,
                       std::vector<std::string> actions,
                       std::vector<std::string> guards);

  const std::vector<std::string>& events() const { return events_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::string>& guards() const { return guards_; }

  std::optional<Kind> kind_of(std::string_view name) const;
  bool contains(std::string_view name) const { return kind_of(name).has_value(); }
  bool is_event(std::string_view name) const { return kind_of(name) == Kind::Event; }
  bool is_action(std::string_view name) const { return kind_of(name) == Kind::Action; }
  bool is_guard(std::string_view name) const { return kind_of(name) == Kind::Guard; }

  /// Name of the implicit output action for an event ("a_" + event).
  std::string implicit_action(std::string_view event) const;

  /// Resolves a name appearing in action position: a declared action, or an
  /// event standing for its implicit action. Empty optional when neither.
  std::optional<std::string> resolve_action(std::string_view name) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> events_;
  std::vector<std::string> actions_;
  std::vector<std::string> guards_;
};

/// Guard expression on a transition: `true` or a single literal over a
/// declared guard variable.
class GuardExpr {
 public:
  GuardExpr() : kind_(Kind::True) {}

  static GuardExpr always() { return GuardExpr(); }
  static GuardExpr var(std::string name) { return GuardExpr(Kind::Var, std::move(name)); }
  static GuardExpr not_var(std::string name) { return GuardExpr(Kind::NotVar, std::move(name)); }

  /// Parses "true" | name | "!" name. Throws ValidationError on junk.
  static GuardExpr parse(std::string_view text);

  bool is_true() const { return kind_ == Kind::True; }
  bool is_positive_var() const { return kind_ == Kind::Var; }
  bool is_negated_var() const { return kind_ == Kind::NotVar; }
  const std::string& name() const { return name_; }

  std::string str() const;

  auto operator<=>(const GuardExpr&) const = default;

 private:
  enum class Kind { True, Var, NotVar };
  GuardExpr(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
};

}  // namespace fsmsynth
