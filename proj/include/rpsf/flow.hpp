#pragma once

#include "rpsf/engine.hpp"

#include <map>
#include <set>
#include <vector>

namespace rpsf {

/// One cash movement.
struct Flow {
  AgentId payer;
  AgentId payee;
  Quantity amount;
  Date date;

  friend bool operator==(const Flow&, const Flow&) = default;
};

bool operator<(const Flow& a, const Flow& b);

/// Multiset of cash movements in canonical (sorted) order.
struct FlowTrace {
  std::vector<Flow> flows;

  friend bool operator==(const FlowTrace&, const FlowTrace&) = default;
};

FlowTrace make_trace(std::vector<Flow> flows);

/// Signed net cash per agent per day; zero entries are dropped.
using NetPosition = std::map<AgentId, std::map<Date, Quantity>>;

/// Whose net positions must agree. An empty agent set means all agents.
struct Perspective {
  std::set<AgentId> agents;

  bool all() const { return agents.empty(); }
  static Perspective everyone() { return {}; }
};

/// Cash-moving events only: payments, spot-sale settlements and the upfront
/// part of credit sales. Credit-sale balances appear as the payments that
/// settle them on their due dates.
FlowTrace monetary_projection(const std::vector<Event>& events);
FlowTrace monetary_projection(const Progression& progression);

NetPosition net_position(const FlowTrace& trace);

/// Exact equality of net positions restricted to the perspective. The
/// all-agents perspective also requires both sides to conserve money per day.
bool equivalent(const FlowTrace& a, const FlowTrace& b, const Perspective& perspective);

/// Per-day sums over all agents are zero.
bool conserves(const NetPosition& position);

/// Total net cash of one agent over the whole trace.
Quantity net_gain(const NetPosition& position, const AgentId& agent);

std::set<AgentId> agents_of(const FlowTrace& trace);

}  // namespace rpsf
