#pragma once

#include "rpsf/action.hpp"
#include "rpsf/contract.hpp"
#include "rpsf/plan.hpp"

#include <map>
#include <string>
#include <vector>

namespace rpsf {

/// Ground level: agents, their single accounts, goods and world flags.
struct Ground {
  std::map<AgentId, Agent> agents;
  std::map<AgentId, Quantity> balances;
  std::map<GoodId, Good> goods;
  std::map<std::string, bool> flags;
  bool overdraft = false;
};

struct Event {
  SeqNo seq = 0;
  Date date;
  Action action;
  std::string delta;  // human-readable summary of the state change
};

using HistoryLog = std::vector<Event>;

/// The four-level state: ground, contracts, plans, history.
struct WorldState {
  Ground ground;
  std::map<ContractId, ContractRecord> contracts;
  std::map<AgentId, PlanCursor> plans;
  HistoryLog history;
  Date now;
  /// When false, contracts created from promises keep only references to
  /// their reasons, not the reason text.
  bool include_reason_text = false;
  /// Flags whose value is branched over by exhaustive enumeration.
  std::vector<std::string> choice_points;

  const Agent& agent(const AgentId& id) const;
  Quantity balance(const AgentId& id) const;
  const Good& good(const GoodId& id) const;
  const ContractRecord& contract(const ContractId& id) const;
  bool flag(const std::string& name) const;
};

void add_agent(WorldState& world, AgentId name, Role role, Quantity balance = 0);
void add_good(WorldState& world, Good good);

/// Applies one action at `date` and returns the successor world. The event is
/// appended to the history with the next sequence number, and contract
/// stages are refreshed against the new history.
///
/// Throws Error with InsufficientFunds, NotOwner, StageViolation,
/// UnknownReference, InvalidAction or NotAPromise.
WorldState apply_event(WorldState world, const Action& action, Date date);

/// Moves the clock forward without an event and refreshes contract stages.
WorldState advance_clock(WorldState world, Date date);

/// Replays `history` on top of `initial` and advances the clock to `until`.
WorldState replay(const WorldState& initial, const HistoryLog& history, Date until);

/// The contract a promise produces. Throws NotAPromise for other kinds.
ContractRecord promise_to_contract(const Action& promise, SigningMode mode, bool include_reason_text = false);

/// Stage of an active contract judged against the history at `now`.
Stage honour_status(const ContractRecord& contract, const HistoryLog& history, Date now);

bool matches(const EventPattern& pattern, const Event& event);
bool holds(const Condition& condition, const WorldState& world);
bool fired(const Trigger& trigger, const WorldState& world);

/// Sum of all account balances.
Quantity total_money(const Ground& ground);

/// Does the event cite the contract through its contract field or reason?
bool cites(const Event& event, const ContractId& id);

}  // namespace rpsf
