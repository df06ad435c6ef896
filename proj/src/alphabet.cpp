#include "fsmsynth/alphabet.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace fsmsynth {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_reserved_word(std::string_view s) {
  static constexpr std::array<std::string_view, 8> kReserved = {
      "true", "false", "G", "F", "X", "U", "R", kEndLabel};
  return std::find(kReserved.begin(), kReserved.end(), s) != kReserved.end();
}

namespace {

void check_names(const std::vector<std::string>& names, const char* role) {
  for (const auto& n : names) {
    if (!is_identifier(n))
      throw ValidationError("invalid " + std::string(role) + " name '" + n + "'");
    if (is_reserved_word(n))
      throw ValidationError("reserved word '" + n + "' cannot be declared as " + role);
  }
}

}  // namespace

Alphabet Alphabet::make(std::vector<std::string> events,
                        std::vector<std::string> actions,
                        std::vector<std::string> guards) {
  check_names(events, "event");
  check_names(actions, "action");
  check_names(guards, "guard");

  Alphabet a;
  a.events_ = std::move(events);
  a.actions_ = std::move(actions);
  a.guards_ = std::move(guards);

  auto find_dup = [](std::vector<std::string> all) -> std::optional<std::string> {
    std::sort(all.begin(), all.end());
    auto it = std::adjacent_find(all.begin(), all.end());
    if (it != all.end()) return *it;
    return std::nullopt;
  };
  std::vector<std::string> all = a.events_;
  all.insert(all.end(), a.actions_.begin(), a.actions_.end());
  all.insert(all.end(), a.guards_.begin(), a.guards_.end());
  if (auto dup = find_dup(all))
    throw ValidationError("name '" + *dup +
                          "' declared twice; events, actions and guards must be disjoint");

  // Implicit output actions, one per event, appended in event order.
  for (const auto& e : a.events_) {
    std::string alias = "a_" + e;
    auto kind = a.kind_of(alias);
    if (!kind.has_value()) {
      a.actions_.push_back(alias);
    } else if (*kind != Kind::Action) {
      throw ValidationError("implicit action '" + alias + "' for event '" + e +
                            "' collides with a declared " +
                            (*kind == Kind::Event ? "event" : "guard"));
    }
  }
  return a;
}

std::optional<Alphabet::Kind> Alphabet::kind_of(std::string_view name) const {
  auto has = [&name](const std::vector<std::string>& v) {
    return std::find(v.begin(), v.end(), name) != v.end();
  };
  if (has(events_)) return Kind::Event;
  if (has(actions_)) return Kind::Action;
  if (has(guards_)) return Kind::Guard;
  return std::nullopt;
}

std::string Alphabet::implicit_action(std::string_view event) const {
  if (!is_event(event))
    throw ValidationError("'" + std::string(event) + "' is not a declared event");
  return "a_" + std::string(event);
}

std::optional<std::string> Alphabet::resolve_action(std::string_view name) const {
  auto kind = kind_of(name);
  if (kind == Kind::Action) return std::string(name);
  if (kind == Kind::Event) {
    std::string alias = "a_" + std::string(name);
    if (is_action(alias)) return alias;
  }
  return std::nullopt;
}

GuardExpr GuardExpr::parse(std::string_view text) {
  if (text == "true") return always();
  if (!text.empty() && text[0] == '!') {
    std::string name(text.substr(1));
    if (!is_identifier(name))
      throw ValidationError("malformed guard literal '" + std::string(text) + "'");
    return not_var(std::move(name));
  }
  if (!is_identifier(text))
    throw ValidationError("malformed guard literal '" + std::string(text) + "'");
  return var(std::string(text));
}

std::string GuardExpr::str() const {
  switch (kind_) {
    case Kind::True: return "true";
    case Kind::Var: return name_;
    case Kind::NotVar: return "!" + name_;
  }
  return {};
}

}  // namespace fsmsynth
