#pragma once

#include "rpsf/core.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace rpsf {

struct ContractRecord;

/// Why an action happens: a label plus references to contracts and earlier events.
struct Reason {
  std::string label;
  std::vector<ContractId> contracts;
  std::vector<SeqNo> events;

  bool cites(const ContractId& id) const;
};

/// Matches logged events. Unset fields match anything.
struct EventPattern {
  ActionKind kind = ActionKind::Pay;
  std::optional<AgentId> actor;
  std::optional<AgentId> counterparty;
  std::optional<GoodId> good;
  std::optional<ContractId> contract;
  std::optional<Quantity> sum;
};

// Predicates over a world state. Used by WaitFor triggers, promise
// conditions and plan branches.
namespace cond {
struct FlagIs {
  std::string flag;
  bool value = true;
};
struct Owns {
  AgentId agent;
  GoodId good;
};
struct BalanceAtLeast {
  AgentId agent;
  Quantity amount;
};
struct StageAtLeast {
  ContractId contract;
  Stage stage = Stage::Active;
};
struct SignedBy {
  ContractId contract;
  AgentId agent;
};
struct EventCountAtLeast {
  std::uint64_t count = 0;
};
}  // namespace cond

using Condition = std::variant<cond::FlagIs, cond::Owns, cond::BalanceAtLeast, cond::StageAtLeast,
                               cond::SignedBy, cond::EventCountAtLeast>;

namespace trig {
struct Always {};
struct AfterEvent {
  EventPattern pattern;
};
struct ByDate {
  Date date;
};
struct ConditionMet {
  Condition condition;
};
}  // namespace trig

using Trigger = std::variant<trig::Always, trig::AfterEvent, trig::ByDate, trig::ConditionMet>;

/// One agent action. Which fields matter depends on the kind:
///   - Pay / ReceivePayment / AcknowledgeReceipt / ...: actor, counterparty, sum
///   - SpotSale / BuyOnCredit: actor is the buyer, counterparty the seller;
///     BuyOnCredit uses `upfront` and `due`, and `contract` names the payment
///     contract it creates
///   - promises: `contract` names the resulting contract, `signing` its mode;
///     PromiseBuyOnCondition with `upfront` set promises a credit purchase
///   - PrepareContract / SignContract: `contract` plus a `draft` when creating
///   - PrepareGood: `good_spec`
struct Action {
  ActionKind kind = ActionKind::Inform;
  AgentId actor;
  AgentId counterparty;
  Quantity sum;
  std::optional<Quantity> upfront;    // BuyOnCredit: part paid at once
  std::optional<Quantity> secondary;  // insurance premium q, managed upper bound
  std::optional<Date> date;           // not executed before this date
  std::optional<Date> due;            // later date e
  std::string channel;
  Reason reason;
  GoodId good;
  ContractId contract;
  std::optional<Trigger> condition;
  std::optional<SigningMode> signing;
  std::optional<Good> good_spec;
  std::shared_ptr<const ContractRecord> draft;
  std::set<EthicalTag> tags;

  /// Seller/buyer for sale kinds.
  const AgentId& buyer() const { return actor; }
  const AgentId& seller() const { return counterparty; }
};

/// Pattern that matches events performing `action`. The sum is matched only
/// when it is positive.
EventPattern pattern_for(const Action& action);

std::string describe(const Trigger& trigger);
std::string describe(const Condition& condition);
std::string describe(const Action& action);

}  // namespace rpsf
