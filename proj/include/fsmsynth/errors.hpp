#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsmsynth {

struct SourcePos {
  int line = 0;  // 1-based; 0 when the input is a bare string
  int column = 0;
  std::size_t offset = 0;
};

inline std::string describe(const SourcePos& pos) {
  if (pos.line > 0)
    return "line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column);
  return "offset " + std::to_string(pos.offset);
}

/// Syntax or name-resolution failure in one of the text formats
/// (.ltl formulas, .scn scenarios, .cdef contract definitions).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, SourcePos pos)
      : std::runtime_error(message + " (" + describe(pos) + ")"), pos_(pos) {}

  const SourcePos& where() const noexcept { return pos_; }

 private:
  SourcePos pos_;
};

/// Violation of a structural contract: alphabet disjointness, FSM
/// well-formedness preconditions, JSON schema, contract-definition coverage.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fsmsynth
