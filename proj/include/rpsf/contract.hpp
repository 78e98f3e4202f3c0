#pragma once

#include "rpsf/action.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rpsf {

/// Conditional obligation of one party.
struct Clause {
  AgentId obliged;
  Trigger trigger = trig::Always{};
  Action action;
  std::optional<Date> deadline;
};

/// Repayment declared as principal - fixed_cost + rate * principal.
/// A positive rate ties the increment causally to the principal.
struct InterestTerms {
  Quantity rate;
  Quantity fixed_cost;
};

struct ContractRecord {
  ContractId id;
  std::string kind;  // free label: "loan", "credit-sale", "savings-account", ...
  std::set<AgentId> parties;
  AgentId initiator;
  std::vector<Clause> clauses;
  std::set<ContractId> references;
  std::set<AgentId> signatures;
  Stage stage = Stage::Drafted;
  std::optional<InterestTerms> interest;
  Reason reason;
};

}  // namespace rpsf
