#include "rpsf/action.hpp"

#include <algorithm>
#include <sstream>

namespace rpsf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

bool Reason::cites(const ContractId& id) const {
  return std::find(contracts.begin(), contracts.end(), id) != contracts.end();
}

EventPattern pattern_for(const Action& action) {
  EventPattern p;
  p.kind = action.kind;
  p.actor = action.actor;
  if (!action.counterparty.empty()) p.counterparty = action.counterparty;
  if (!action.good.empty()) p.good = action.good;
  if (action.sum.sign() > 0) p.sum = action.sum;
  return p;
}

std::string describe(const Condition& condition) {
  return std::visit(
      overloaded{
          [](const cond::FlagIs& c) { return "flag " + c.flag + (c.value ? " is set" : " is clear"); },
          [](const cond::Owns& c) { return c.agent + " owns " + c.good; },
          [](const cond::BalanceAtLeast& c) { return "balance of " + c.agent + " >= " + c.amount.to_string(); },
          [](const cond::StageAtLeast& c) {
            return "contract " + c.contract + " reached " + std::string(to_string(c.stage));
          },
          [](const cond::SignedBy& c) { return "contract " + c.contract + " signed by " + c.agent; },
          [](const cond::EventCountAtLeast& c) { return "at least " + std::to_string(c.count) + " events logged"; },
      },
      condition);
}

std::string describe(const Trigger& trigger) {
  return std::visit(
      overloaded{
          [](const trig::Always&) { return std::string("always"); },
          [](const trig::AfterEvent& t) {
            std::ostringstream os;
            os << "after " << to_string(t.pattern.kind);
            if (t.pattern.actor) os << " by " << *t.pattern.actor;
            if (t.pattern.counterparty) os << " with " << *t.pattern.counterparty;
            if (t.pattern.good) os << " on " << *t.pattern.good;
            if (t.pattern.contract) os << " citing " << *t.pattern.contract;
            if (t.pattern.sum) os << " for " << *t.pattern.sum;
            return os.str();
          },
          [](const trig::ByDate& t) { return "by day " + std::to_string(t.date.day); },
          [](const trig::ConditionMet& t) { return "when " + describe(t.condition); },
      },
      trigger);
}

std::string describe(const Action& a) {
  std::ostringstream os;
  os << to_string(a.kind) << " " << a.actor;
  switch (a.kind) {
    case ActionKind::SpotSale:
    case ActionKind::BuyOnCredit:
      os << " buys " << a.good << " from " << a.counterparty << " for " << a.sum;
      if (a.upfront) os << " (" << *a.upfront << " at once)";
      if (a.due) os << " due day " << a.due->day;
      break;
    case ActionKind::PrepareGood:
      if (a.good_spec) os << " prepares " << a.good_spec->id;
      break;
    case ActionKind::PrepareContract:
    case ActionKind::SignContract:
      os << " " << a.contract;
      break;
    default:
      if (!a.counterparty.empty()) os << " -> " << a.counterparty;
      if (a.sum.sign() != 0) os << " " << a.sum;
      if (!a.good.empty()) os << " [" << a.good << "]";
      if (!a.contract.empty()) os << " {" << a.contract << "}";
      break;
  }
  if (!a.reason.label.empty()) os << " : " << a.reason.label;
  return os.str();
}

}  // namespace rpsf
