#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsmsynth/machine.hpp"

namespace fsmsynth {

/// Contract definition: the hand-written parts of the target contract,
/// keyed by the names the synthesized machine uses. Bodies are verbatim
/// code blocks.
struct ContractDef {
  std::string name;
  std::string header;
  std::string state_decl;
  std::vector<std::pair<std::string, std::string>> predicates;  // guard -> body
  std::vector<std::pair<std::string, std::string>> actions;     // action -> body
  std::vector<std::string> payable;                             // event names

  const std::string* find_predicate(std::string_view guard) const;
  const std::string* find_action(std::string_view action) const;
};

/// Parses the section-based .cdef format: `[contract Name]`, `[header]`,
/// `[state]`, `[predicate g]`, `[action a]`, `[payable e1, e2]`; section
/// bodies run verbatim until the next section header.
ContractDef parse_contract_def(std::string_view text);

struct ManifestBranch {
  int source = 0;
  GuardExpr guard;
  std::vector<std::string> actions;
  int target = 0;

  auto operator<=>(const ManifestBranch&) const = default;
};

/// Method name plus its guarded branches, in emission order.
using ContractManifest = std::vector<std::pair<std::string, std::vector<ManifestBranch>>>;

struct GeneratedContract {
  std::string source;
  ContractManifest manifest;
};

/// Emits the contract: a state enum, the verbatim state block, one view
/// function per predicate and one method per event whose body is an
/// if/else chain over that event's transitions ending in revert().
GeneratedContract generate_contract(const Fsm& m, const ContractDef& def);

}  // namespace fsmsynth
