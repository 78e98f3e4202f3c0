#include "rpsf/synthesis.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace rpsf {

namespace {

const AgentId kSaver = "X";
const AgentId kBank = "Y";
const AgentId kBroker = "Z";
const std::array<AgentId, 3> kAgents{kSaver, kBank, kBroker};

struct Search {
  SynthesisConfig cfg;
  FlowTrace target;
  NetPosition target_pos;
  std::vector<Quantity> amounts;
  std::vector<Date> due_dates;
  std::map<GoodId, AgentId> first_owner;
  SynthesisResult result;

  bool allows(Primitive p) const { return cfg.catalogue.count(p) > 0; }

  std::vector<Action> candidates(const WorldState& w) const {
    std::vector<Action> out;
    for (const auto& [id, g] : w.ground.goods) {
      for (const auto& buyer : kAgents) {
        if (buyer == g.owner) continue;
        for (const auto& price : amounts) {
          if (allows(Primitive::SpotSale)) {
            Action a;
            a.kind = ActionKind::SpotSale;
            a.actor = buyer;
            a.counterparty = g.owner;
            a.good = id;
            a.sum = price;
            out.push_back(a);
          }
          if (allows(Primitive::CreditSale)) {
            for (const auto& due : due_dates) {
              Action a;
              a.kind = ActionKind::BuyOnCredit;
              a.actor = buyer;
              a.counterparty = g.owner;
              a.good = id;
              a.sum = price;
              a.due = due;
              out.push_back(a);
            }
          }
        }
      }
    }
    // The broker may prepare one good.
    if (allows(Primitive::PrepareGood) && !w.ground.goods.count("G") && !amounts.empty()) {
      Action a;
      a.kind = ActionKind::PrepareGood;
      a.actor = kBroker;
      a.good = "G";
      a.good_spec = Good{"G", "commodity", kBroker, amounts.back(), amounts.back(), false};
      out.push_back(a);
    }
    return out;
  }

  // Adjacent actions on different goods commute; only one order is explored.
  static bool out_of_order(const Action* prev, const Action& next) {
    if (!prev || prev->good == next.good) return false;
    return describe(next) < describe(*prev);
  }

  // Flows of the executed prefix plus those its open credit sales will settle.
  FlowTrace projected(const WorldState& w) const {
    FlowTrace t = monetary_projection(w.history);
    for (const auto& [id, c] : w.contracts) {
      if (c.kind != "credit-sale" || c.clauses.empty()) continue;
      const Clause& cl = c.clauses.front();
      t.flows.push_back(Flow{cl.action.actor, cl.action.counterparty, cl.action.sum, cl.deadline.value_or(w.now)});
    }
    return make_trace(std::move(t.flows));
  }

  bool round_trip(const WorldState& w) const {
    return std::all_of(w.ground.goods.begin(), w.ground.goods.end(), [&](const auto& kv) {
      auto it = first_owner.find(kv.first);
      const AgentId& start = it != first_owner.end() ? it->second : kBroker;
      return kv.second.owner == start;
    });
  }

  void dfs(const WorldState& seed, const WorldState& w, std::vector<Action>& seq) {
    ++result.explored;
    if (round_trip(w) && equivalent(projected(w), target, cfg.perspective)) {
      Progression p = run_sequence(seed, seq);
      if (!equivalent(monetary_projection(p), target, cfg.perspective)) {
        throw Error(ErrorCode::Precondition, "witness does not reproduce the target when re-run");
      }
      result.witnesses.push_back(Witness{seq, std::move(p)});
    }
    if (seq.size() == cfg.bound) return;
    const std::optional<Action> prev = seq.empty() ? std::nullopt : std::optional<Action>(seq.back());
    for (const auto& a : candidates(w)) {
      if (out_of_order(prev ? &*prev : nullptr, a)) continue;
      WorldState next;
      try {
        next = apply_event(w, a, w.now);
      } catch (const Error&) {
        continue;
      }
      seq.push_back(a);
      dfs(seed, next, seq);
      seq.pop_back();
    }
  }
};

}  // namespace

std::set<Primitive> all_primitives() {
  return {Primitive::SpotSale,        Primitive::CreditSale,   Primitive::PrepareGood,
          Primitive::PrepareContract, Primitive::SignContract, Primitive::Inform};
}

WorldState synthesis_seed(const FlowTrace& target, std::size_t bound) {
  Quantity largest = 1;
  Quantity total;
  for (const auto& f : target.flows) {
    largest = std::max(largest, f.amount);
    total += f.amount;
  }
  const Quantity cash = (total + largest) * Quantity(static_cast<std::int64_t>(bound + 1));
  WorldState w;
  add_agent(w, kSaver, Role::Person, cash);
  add_agent(w, kBank, Role::Bank, cash);
  add_agent(w, kBroker, Role::Broker, cash);
  add_good(w, Good{"S", "commodity", kBroker, largest, largest, false});
  return w;
}

SynthesisResult synthesize(const FlowTrace& target, const SynthesisConfig& config) {
  if (config.bound > kSynthesisLimit) {
    throw Error(ErrorCode::BoundExceeded, "bound " + std::to_string(config.bound) + " exceeds the limit of " +
                                              std::to_string(kSynthesisLimit));
  }
  Search s;
  s.cfg = config;
  s.target = make_trace(target.flows);
  s.target_pos = net_position(s.target);
  std::set<Quantity> amounts;
  std::set<Date> dates;
  for (const auto& f : s.target.flows) {
    amounts.insert(f.amount);
    if (f.date.day > 0) dates.insert(f.date);
  }
  s.amounts.assign(amounts.begin(), amounts.end());
  s.due_dates.assign(dates.begin(), dates.end());

  const WorldState seed = synthesis_seed(s.target, config.bound);
  for (const auto& [id, g] : seed.ground.goods) s.first_owner[id] = g.owner;

  s.result.bound = config.bound;
  s.result.reductions = {
      "agent roles fixed: X saver, Y bank, Z broker",
      "contract preparation, signing and informing change no cash or ownership and are not enumerated",
      "adjacent actions on different goods explored in one canonical order",
      "prices drawn from the target amounts, credit due dates from the target dates",
  };
  std::vector<Action> seq;
  s.dfs(seed, seed, seq);
  s.result.found = !s.result.witnesses.empty();
  return std::move(s.result);
}

std::vector<Plan> witness_plans(const Witness& w) {
  std::map<AgentId, Plan> plans;
  const auto& events = w.progression.events;
  for (std::size_t k = 0; k < events.size(); ++k) {
    const Action& a = events[k].action;
    Plan& p = plans[a.actor];
    p.agent = a.actor;
    if (k > 0) p.steps.push_back(wait_for(trig::ConditionMet{cond::EventCountAtLeast{k}}));
    Action step = a;
    if (a.kind == ActionKind::BuyOnCredit && step.contract.empty()) step.contract = "credit-" + std::to_string(events[k].seq);
    if (k >= w.actions.size()) step.date = events[k].date;
    p.steps.push_back(do_(step));
  }
  std::vector<Plan> out;
  for (auto& [_, p] : plans) out.push_back(std::move(p));
  return out;
}

namespace {
constexpr std::array<std::pair<Primitive, std::string_view>, 6> kPrimitives{{
    {Primitive::SpotSale, "SpotSale"},
    {Primitive::CreditSale, "CreditSale"},
    {Primitive::PrepareGood, "PrepareGood"},
    {Primitive::PrepareContract, "PrepareContract"},
    {Primitive::SignContract, "SignContract"},
    {Primitive::Inform, "Inform"},
}};
}  // namespace

std::string_view to_string(Primitive p) {
  for (const auto& [k, s] : kPrimitives) {
    if (k == p) return s;
  }
  return "?";
}

std::optional<Primitive> primitive_from_string(std::string_view s) {
  for (const auto& [k, n] : kPrimitives) {
    if (n == s) return k;
  }
  return std::nullopt;
}

}  // namespace rpsf
