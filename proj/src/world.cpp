#include "rpsf/world.hpp"

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

[[noreturn]] void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

void require_agent(const WorldState& w, const AgentId& id, std::string_view role) {
  if (id.empty()) fail(ErrorCode::InvalidAction, std::string(role) + " is missing");
  if (!w.ground.agents.count(id)) fail(ErrorCode::UnknownReference, "unknown agent '" + id + "'");
}

void require_contract(const WorldState& w, const ContractId& id) {
  if (!w.contracts.count(id)) fail(ErrorCode::UnknownReference, "unknown contract '" + id + "'");
}

bool needs_counterparty(ActionKind k) {
  switch (k) {
    case ActionKind::SignContract:
    case ActionKind::PrepareContract:
    case ActionKind::PrepareGood:
      return false;
    default:
      return true;
  }
}

bool creates_contract(ActionKind k) {
  return is_promise(k) || k == ActionKind::BuyOnCredit || k == ActionKind::PrepareContract ||
         k == ActionKind::SignContract;
}

void validate_references(const WorldState& w, const Action& a) {
  for (const auto& id : a.reason.contracts) require_contract(w, id);
  for (SeqNo s : a.reason.events) {
    if (s == 0 || s > w.history.size()) {
      fail(ErrorCode::UnknownReference, "reason cites unknown event #" + std::to_string(s));
    }
  }
  if (!a.contract.empty() && !creates_contract(a.kind)) require_contract(w, a.contract);
}

void validate_contract_shape(const WorldState& w, const ContractRecord& c) {
  if (c.id.empty()) fail(ErrorCode::InvalidAction, "contract without id");
  if (c.parties.empty()) fail(ErrorCode::InvalidAction, "contract " + c.id + " has no parties");
  for (const auto& p : c.parties) require_agent(w, p, "party");
  if (!c.parties.count(c.initiator)) {
    fail(ErrorCode::InvalidAction, "initiator of " + c.id + " is not a party");
  }
  for (const auto& cl : c.clauses) {
    if (!c.parties.count(cl.obliged)) {
      fail(ErrorCode::InvalidAction, "clause of " + c.id + " obliges non-party '" + cl.obliged + "'");
    }
  }
  for (const auto& r : c.references) {
    // A new contract can only refer to existing ones, which keeps the graph acyclic.
    if (r == c.id) fail(ErrorCode::InvalidAction, "contract " + c.id + " refers to itself");
    require_contract(w, r);
  }
}

void debit(WorldState& w, const AgentId& who, const Quantity& amount) {
  Quantity& bal = w.ground.balances[who];
  if (!w.ground.overdraft && bal < amount) {
    fail(ErrorCode::InsufficientFunds,
         who + " holds " + bal.to_string() + " but must pay " + amount.to_string());
  }
  bal -= amount;
}

void transfer(WorldState& w, const AgentId& from, const AgentId& to, const Quantity& amount,
              std::ostringstream& delta) {
  if (amount.is_zero()) return;
  debit(w, from, amount);
  w.ground.balances[to] += amount;
  delta << from << ":-" << amount << " " << to << ":+" << amount << " ";
}

void transfer_good(WorldState& w, const Action& a, std::ostringstream& delta) {
  auto it = w.ground.goods.find(a.good);
  if (it == w.ground.goods.end()) fail(ErrorCode::UnknownReference, "unknown good '" + a.good + "'");
  if (it->second.owner != a.seller()) {
    fail(ErrorCode::NotOwner, a.seller() + " does not own " + a.good + " (owner: " + it->second.owner + ")");
  }
  if (a.seller() == a.buyer()) fail(ErrorCode::InvalidAction, "sale of " + a.good + " to its owner");
  it->second.owner = a.buyer();
  delta << a.good << ":" << a.seller() << "->" << a.buyer() << " ";
}

Stage judge_stage(const ContractRecord& contract, const HistoryLog& history, Date now, const WorldState* world);

void refresh_stages(WorldState& w) {
  for (auto& [id, c] : w.contracts) {
    if (stage_rank(c.stage) < stage_rank(Stage::Active)) continue;
    Stage s = judge_stage(c, w.history, w.now, &w);
    if (stage_rank(s) > stage_rank(c.stage)) c.stage = s;
  }
}

bool trigger_fired_in_history(const Trigger& t, const HistoryLog& history, Date now, const WorldState* world) {
  return std::visit(overloaded{
                        [](const trig::Always&) { return true; },
                        [&](const trig::AfterEvent& e) {
                          return std::any_of(history.begin(), history.end(), [&](const Event& ev) {
                            return ev.date <= now && matches(e.pattern, ev);
                          });
                        },
                        [&](const trig::ByDate& d) { return now >= d.date; },
                        // Without the world, a ground condition is assumed to have arisen.
                        [&](const trig::ConditionMet& c) { return world == nullptr || holds(c.condition, *world); },
                    },
                    t);
}

void sign(WorldState& w, const Action& a, std::ostringstream& delta) {
  auto it = w.contracts.find(a.contract);
  if (it == w.contracts.end()) {
    if (!a.draft) fail(ErrorCode::UnknownReference, "unknown contract '" + a.contract + "'");
    ContractRecord c = *a.draft;
    c.id = a.contract;
    validate_contract_shape(w, c);
    c.signatures.clear();
    c.stage = Stage::Drafted;
    it = w.contracts.emplace(c.id, std::move(c)).first;
    delta << it->first << ":created ";
  }
  ContractRecord& c = it->second;
  if (!c.parties.count(a.actor)) {
    fail(ErrorCode::StageViolation, a.actor + " is not a party to " + c.id);
  }
  if (stage_rank(c.stage) > stage_rank(Stage::PartiallySigned)) {
    fail(ErrorCode::StageViolation, c.id + " is " + std::string(to_string(c.stage)) + " and cannot be signed");
  }
  if (c.signatures.count(a.actor)) fail(ErrorCode::StageViolation, a.actor + " already signed " + c.id);
  c.signatures.insert(a.actor);
  c.stage = c.signatures == c.parties ? Stage::Active : Stage::PartiallySigned;
  delta << c.id << ":" << to_string(c.stage) << " ";
}

}  // namespace

const Agent& WorldState::agent(const AgentId& id) const {
  auto it = ground.agents.find(id);
  if (it == ground.agents.end()) fail(ErrorCode::UnknownReference, "unknown agent '" + id + "'");
  return it->second;
}

Quantity WorldState::balance(const AgentId& id) const {
  auto it = ground.balances.find(id);
  return it == ground.balances.end() ? Quantity{} : it->second;
}

const Good& WorldState::good(const GoodId& id) const {
  auto it = ground.goods.find(id);
  if (it == ground.goods.end()) fail(ErrorCode::UnknownReference, "unknown good '" + id + "'");
  return it->second;
}

const ContractRecord& WorldState::contract(const ContractId& id) const {
  auto it = contracts.find(id);
  if (it == contracts.end()) fail(ErrorCode::UnknownReference, "unknown contract '" + id + "'");
  return it->second;
}

bool WorldState::flag(const std::string& name) const {
  auto it = ground.flags.find(name);
  return it != ground.flags.end() && it->second;
}

void add_agent(WorldState& world, AgentId name, Role role, Quantity balance) {
  if (world.ground.agents.count(name)) fail(ErrorCode::InvalidAction, "duplicate agent '" + name + "'");
  world.ground.balances[name] = std::move(balance);
  world.ground.agents.emplace(name, Agent{name, role});
}

void add_good(WorldState& world, Good good) {
  if (world.ground.goods.count(good.id)) fail(ErrorCode::InvalidAction, "duplicate good '" + good.id + "'");
  require_agent(world, good.owner, "owner");
  world.ground.goods.emplace(good.id, std::move(good));
}

bool cites(const Event& event, const ContractId& id) {
  return event.action.contract == id || event.action.reason.cites(id);
}

bool matches(const EventPattern& p, const Event& ev) {
  const Action& a = ev.action;
  if (a.kind != p.kind) return false;
  if (p.actor && a.actor != *p.actor) return false;
  if (p.counterparty && a.counterparty != *p.counterparty) return false;
  if (p.good) {
    const GoodId& g = a.kind == ActionKind::PrepareGood && a.good_spec ? a.good_spec->id : a.good;
    if (g != *p.good) return false;
  }
  if (p.contract && !cites(ev, *p.contract)) return false;
  if (p.sum && a.sum != *p.sum) return false;
  return true;
}

bool holds(const Condition& condition, const WorldState& w) {
  return std::visit(
      overloaded{
          [&](const cond::FlagIs& c) { return w.flag(c.flag) == c.value; },
          [&](const cond::Owns& c) {
            auto it = w.ground.goods.find(c.good);
            return it != w.ground.goods.end() && it->second.owner == c.agent;
          },
          [&](const cond::BalanceAtLeast& c) { return w.balance(c.agent) >= c.amount; },
          [&](const cond::StageAtLeast& c) {
            auto it = w.contracts.find(c.contract);
            return it != w.contracts.end() && stage_rank(it->second.stage) >= stage_rank(c.stage);
          },
          [&](const cond::SignedBy& c) {
            auto it = w.contracts.find(c.contract);
            return it != w.contracts.end() && it->second.signatures.count(c.agent) > 0;
          },
          [&](const cond::EventCountAtLeast& c) { return w.history.size() >= c.count; },
      },
      condition);
}

bool fired(const Trigger& trigger, const WorldState& w) {
  return std::visit(overloaded{
                        [](const trig::Always&) { return true; },
                        [&](const trig::AfterEvent& e) {
                          return std::any_of(w.history.begin(), w.history.end(),
                                             [&](const Event& ev) { return matches(e.pattern, ev); });
                        },
                        [&](const trig::ByDate& d) { return w.now >= d.date; },
                        [&](const trig::ConditionMet& c) { return holds(c.condition, w); },
                    },
                    trigger);
}

Quantity total_money(const Ground& ground) {
  Quantity sum;
  for (const auto& [_, b] : ground.balances) sum += b;
  return sum;
}

ContractRecord promise_to_contract(const Action& p, SigningMode mode, bool include_reason_text) {
  if (!is_promise(p.kind)) {
    fail(ErrorCode::NotAPromise, std::string(to_string(p.kind)) + " does not produce a contract");
  }
  if (p.actor.empty() || p.counterparty.empty()) {
    fail(ErrorCode::InvalidAction, "promise needs a promisor and a promisee");
  }

  ContractRecord c;
  c.id = p.contract;
  c.kind = "promise";
  c.parties = {p.actor, p.counterparty};
  c.initiator = p.actor;
  c.reason = p.reason;
  if (!include_reason_text) c.reason.label.clear();
  c.references.insert(p.reason.contracts.begin(), p.reason.contracts.end());

  Clause cl;
  cl.obliged = p.actor;
  Action& obliged = cl.action;
  obliged.actor = p.actor;
  obliged.counterparty = p.counterparty;
  obliged.sum = p.sum;
  obliged.contract = p.contract;
  obliged.channel = p.channel;

  switch (p.kind) {
    case ActionKind::PromisePay:
      obliged.kind = ActionKind::Pay;
      cl.trigger = p.condition.value_or(trig::Always{});
      cl.deadline = p.due;
      break;
    case ActionKind::PromiseAcceptPayment:
      obliged.kind = ActionKind::ReceivePayment;
      cl.trigger = p.condition.value_or(trig::Always{});
      cl.deadline = p.due;
      break;
    case ActionKind::PromiseBuyOnCondition: {
      obliged.good = p.good;
      EventPattern prepared{ActionKind::PrepareGood, p.counterparty, std::nullopt, p.good, std::nullopt,
                            std::nullopt};
      cl.trigger = p.condition.value_or(trig::AfterEvent{prepared});
      if (p.upfront) {
        // Deferred purchase: `due` is the payment date, not a deadline for buying.
        obliged.kind = ActionKind::BuyOnCredit;
        obliged.upfront = p.upfront;
        obliged.due = p.due;
        obliged.contract.clear();
      } else {
        obliged.kind = ActionKind::SpotSale;
        cl.deadline = p.due;
      }
      break;
    }
    case ActionKind::PromiseInsurancePayout: {
      obliged.kind = ActionKind::Pay;
      EventPattern premium{ActionKind::Pay, p.counterparty, p.actor, std::nullopt, std::nullopt, p.secondary};
      cl.trigger = p.condition.value_or(trig::AfterEvent{premium});
      cl.deadline = p.due;
      break;
    }
    case ActionKind::PromiseManageFunds: {
      // The managed sum lies in a range, so the discharging payment matches any amount.
      obliged.kind = ActionKind::Pay;
      obliged.sum = 0;
      EventPattern deposit{ActionKind::Pay, p.counterparty, p.actor, std::nullopt, std::nullopt, std::nullopt};
      cl.trigger = p.condition.value_or(trig::AfterEvent{deposit});
      cl.deadline = p.due;
      break;
    }
    default:
      break;
  }
  c.clauses.push_back(std::move(cl));

  if (mode == SigningMode::BothParties) {
    c.signatures = c.parties;
    c.stage = Stage::Active;
  } else {
    c.signatures = {p.actor};
    c.stage = Stage::PartiallySigned;
  }
  return c;
}

Stage honour_status(const ContractRecord& contract, const HistoryLog& history, Date now) {
  return judge_stage(contract, history, now, nullptr);
}

namespace {

Stage judge_stage(const ContractRecord& contract, const HistoryLog& history, Date now, const WorldState* world) {
  if (stage_rank(contract.stage) < stage_rank(Stage::Active)) return contract.stage;
  if (contract.stage == Stage::Honoured || contract.stage == Stage::Breached) return contract.stage;

  bool any_discharged = false;
  bool all_settled = true;
  bool breached = false;
  for (const auto& cl : contract.clauses) {
    const EventPattern pattern = pattern_for(cl.action);
    const bool discharged = std::any_of(history.begin(), history.end(), [&](const Event& ev) {
      return ev.date <= now && matches(pattern, ev) && cites(ev, contract.id);
    });
    if (discharged) {
      any_discharged = true;
      continue;
    }
    if (cl.deadline && now > *cl.deadline) {
      // An obligation whose condition never arose lapses at its deadline.
      if (trigger_fired_in_history(cl.trigger, history, now, world)) breached = true;
      continue;
    }
    all_settled = false;
  }
  if (breached) return Stage::Breached;
  if (all_settled) return Stage::Honoured;
  if (any_discharged) return Stage::PartiallyHonoured;
  return contract.stage;
}

}  // namespace

WorldState apply_event(WorldState w, const Action& a, Date date) {
  if (date < w.now) {
    fail(ErrorCode::InvalidAction, "event dated day " + std::to_string(date.day) + " before clock day " +
                                       std::to_string(w.now.day));
  }
  require_agent(w, a.actor, "actor");
  if (needs_counterparty(a.kind)) require_agent(w, a.counterparty, "counterparty");
  if (a.sum.sign() < 0) fail(ErrorCode::InvalidAction, "negative sum " + a.sum.to_string());
  if (a.upfront && a.upfront->sign() < 0) fail(ErrorCode::InvalidAction, "negative upfront payment");
  if (a.secondary && a.secondary->sign() < 0) fail(ErrorCode::InvalidAction, "negative secondary sum");
  validate_references(w, a);

  const SeqNo seq = w.history.size() + 1;
  std::ostringstream delta;
  w.now = date;

  switch (a.kind) {
    case ActionKind::Pay:
      transfer(w, a.actor, a.counterparty, a.sum, delta);
      break;

    case ActionKind::SpotSale:
      if (a.good.empty()) fail(ErrorCode::InvalidAction, "sale without a good");
      transfer_good(w, a, delta);
      transfer(w, a.buyer(), a.seller(), a.sum, delta);
      break;

    case ActionKind::BuyOnCredit: {
      if (a.good.empty()) fail(ErrorCode::InvalidAction, "sale without a good");
      if (!a.due) fail(ErrorCode::InvalidAction, "credit sale without a due date");
      const Quantity upfront = a.upfront.value_or(Quantity{});
      if (upfront > a.sum) fail(ErrorCode::InvalidAction, "upfront payment exceeds the price");
      const ContractId id = a.contract.empty() ? "credit-" + std::to_string(seq) : a.contract;
      if (w.contracts.count(id)) fail(ErrorCode::InvalidAction, "contract '" + id + "' already exists");
      transfer_good(w, a, delta);
      transfer(w, a.buyer(), a.seller(), upfront, delta);
      const Quantity deferred = a.sum - upfront;
      if (deferred.sign() > 0) {
        ContractRecord c;
        c.id = id;
        c.kind = "credit-sale";
        c.parties = {a.buyer(), a.seller()};
        c.initiator = a.buyer();
        c.signatures = c.parties;
        c.stage = Stage::Active;
        c.references.insert(a.reason.contracts.begin(), a.reason.contracts.end());
        Clause cl;
        cl.obliged = a.buyer();
        cl.action.kind = ActionKind::Pay;
        cl.action.actor = a.buyer();
        cl.action.counterparty = a.seller();
        cl.action.sum = deferred;
        cl.action.contract = id;
        cl.deadline = a.due;
        c.clauses.push_back(std::move(cl));
        w.contracts.emplace(id, std::move(c));
        delta << id << ":Active ";
      }
      break;
    }

    case ActionKind::PromisePay:
    case ActionKind::PromiseAcceptPayment:
    case ActionKind::PromiseBuyOnCondition:
    case ActionKind::PromiseInsurancePayout:
    case ActionKind::PromiseManageFunds: {
      Action p = a;
      if (p.contract.empty()) p.contract = "promise-" + std::to_string(seq);
      if (w.contracts.count(p.contract)) {
        fail(ErrorCode::InvalidAction, "contract '" + p.contract + "' already exists");
      }
      ContractRecord c =
          promise_to_contract(p, a.signing.value_or(SigningMode::BothParties), w.include_reason_text);
      validate_contract_shape(w, c);
      delta << c.id << ":" << to_string(c.stage) << " ";
      w.contracts.emplace(c.id, std::move(c));
      break;
    }

    case ActionKind::PrepareContract: {
      if (!a.draft) fail(ErrorCode::InvalidAction, "PrepareContract without a draft");
      ContractRecord c = *a.draft;
      if (!a.contract.empty()) c.id = a.contract;
      if (w.contracts.count(c.id)) fail(ErrorCode::StageViolation, "contract '" + c.id + "' is already prepared");
      validate_contract_shape(w, c);
      c.signatures.clear();
      c.stage = Stage::Prepared;
      delta << c.id << ":Prepared ";
      w.contracts.emplace(c.id, std::move(c));
      break;
    }

    case ActionKind::SignContract:
      if (a.contract.empty()) fail(ErrorCode::InvalidAction, "SignContract without a contract");
      sign(w, a, delta);
      break;

    case ActionKind::PrepareGood: {
      if (!a.good_spec) fail(ErrorCode::InvalidAction, "PrepareGood without a good specification");
      Good g = *a.good_spec;
      g.owner = a.actor;
      if (g.id.empty()) fail(ErrorCode::InvalidAction, "good without id");
      if (w.ground.goods.count(g.id)) fail(ErrorCode::InvalidAction, "good '" + g.id + "' already exists");
      if (g.block_size.sign() <= 0) fail(ErrorCode::InvalidAction, "block size must be positive");
      if (g.market_value) {
        if (g.market_value->sign() < 0) fail(ErrorCode::InvalidAction, "negative market value");
        if (!(*g.market_value / g.block_size).is_integer()) {
          fail(ErrorCode::InvalidAction, "value " + g.market_value->to_string() + " of " + g.id +
                                             " is not a whole number of blocks of " + g.block_size.to_string());
        }
      }
      delta << g.id << ":prepared-by-" << g.owner << " ";
      w.ground.goods.emplace(g.id, std::move(g));
      break;
    }

    case ActionKind::ExchangeDenominations:
      if (w.balance(a.actor) < a.sum || w.balance(a.counterparty) < a.sum) {
        fail(ErrorCode::InsufficientFunds, "cannot exchange denominations of " + a.sum.to_string());
      }
      break;

    case ActionKind::ReceivePayment:
    case ActionKind::AcknowledgeReceipt:
    case ActionKind::AssertExpectation:
    case ActionKind::JustifyEntitlement:
    case ActionKind::Inform:
    case ActionKind::RequestPrepareGood:
      break;
  }

  std::string d = delta.str();
  if (!d.empty() && d.back() == ' ') d.pop_back();
  w.history.push_back(Event{seq, date, a, std::move(d)});
  refresh_stages(w);
  return w;
}

WorldState advance_clock(WorldState w, Date date) {
  if (date < w.now) fail(ErrorCode::InvalidAction, "clock cannot move backwards");
  w.now = date;
  refresh_stages(w);
  return w;
}

WorldState replay(const WorldState& initial, const HistoryLog& history, Date until) {
  WorldState w = initial;
  for (const auto& ev : history) w = apply_event(std::move(w), ev.action, ev.date);
  if (until > w.now) w = advance_clock(std::move(w), until);
  return w;
}

}  // namespace rpsf
