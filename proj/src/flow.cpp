#include "rpsf/flow.hpp"

#include <algorithm>
#include <tuple>

namespace rpsf {

bool operator<(const Flow& a, const Flow& b) {
  if (a.date != b.date) return a.date < b.date;
  if (a.payer != b.payer) return a.payer < b.payer;
  if (a.payee != b.payee) return a.payee < b.payee;
  return a.amount < b.amount;
}

FlowTrace make_trace(std::vector<Flow> flows) {
  flows.erase(std::remove_if(flows.begin(), flows.end(), [](const Flow& f) { return f.amount.sign() <= 0; }),
              flows.end());
  std::sort(flows.begin(), flows.end());
  return FlowTrace{std::move(flows)};
}

FlowTrace monetary_projection(const std::vector<Event>& events) {
  std::vector<Flow> flows;
  for (const auto& e : events) {
    const Action& a = e.action;
    switch (a.kind) {
      case ActionKind::Pay:
        flows.push_back(Flow{a.actor, a.counterparty, a.sum, e.date});
        break;
      case ActionKind::SpotSale:
        flows.push_back(Flow{a.buyer(), a.seller(), a.sum, e.date});
        break;
      case ActionKind::BuyOnCredit:
        if (a.upfront) flows.push_back(Flow{a.buyer(), a.seller(), *a.upfront, e.date});
        break;
      default:
        break;
    }
  }
  return make_trace(std::move(flows));
}

FlowTrace monetary_projection(const Progression& progression) { return monetary_projection(progression.events); }

NetPosition net_position(const FlowTrace& trace) {
  NetPosition pos;
  for (const auto& f : trace.flows) {
    pos[f.payer][f.date] -= f.amount;
    pos[f.payee][f.date] += f.amount;
  }
  for (auto it = pos.begin(); it != pos.end();) {
    auto& days = it->second;
    for (auto d = days.begin(); d != days.end();) {
      d = d->second.is_zero() ? days.erase(d) : std::next(d);
    }
    it = days.empty() ? pos.erase(it) : std::next(it);
  }
  return pos;
}

bool conserves(const NetPosition& position) {
  std::map<Date, Quantity> per_day;
  for (const auto& [_, days] : position) {
    for (const auto& [d, q] : days) per_day[d] += q;
  }
  return std::all_of(per_day.begin(), per_day.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

bool equivalent(const FlowTrace& a, const FlowTrace& b, const Perspective& perspective) {
  const NetPosition na = net_position(a);
  const NetPosition nb = net_position(b);
  if (perspective.all()) return conserves(na) && conserves(nb) && na == nb;
  static const std::map<Date, Quantity> kNone;
  for (const auto& agent : perspective.agents) {
    auto ia = na.find(agent);
    auto ib = nb.find(agent);
    const auto& da = ia == na.end() ? kNone : ia->second;
    const auto& db = ib == nb.end() ? kNone : ib->second;
    if (da != db) return false;
  }
  return true;
}

Quantity net_gain(const NetPosition& position, const AgentId& agent) {
  Quantity sum;
  auto it = position.find(agent);
  if (it == position.end()) return sum;
  for (const auto& [_, q] : it->second) sum += q;
  return sum;
}

std::set<AgentId> agents_of(const FlowTrace& trace) {
  std::set<AgentId> out;
  for (const auto& f : trace.flows) {
    out.insert(f.payer);
    out.insert(f.payee);
  }
  return out;
}

}  // namespace rpsf
