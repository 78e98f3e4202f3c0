#include "rpsf/engine.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace rpsf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Resolution {
  enum class State { Ready, Blocked, Finished };
  State state = State::Finished;
  std::size_t pc = 0;
  const Action* action = nullptr;
  std::optional<Date> wake;
  std::string waiting_for;
};

// Walks internal steps (waits, branches, jumps) from the cursor up to the next
// action, without committing anything.
Resolution resolve(const PlanCursor& cursor, const WorldState& world) {
  Resolution r;
  if (!cursor.code) return r;
  const auto& code = *cursor.code;
  std::size_t pc = cursor.pc;
  while (pc < code.size()) {
    const Instr& in = code[pc];
    if (const auto* d = std::get_if<instr::Do>(&in)) {
      if (d->action.date && *d->action.date > world.now) {
        r.state = Resolution::State::Blocked;
        r.pc = pc;
        r.wake = d->action.date;
        r.waiting_for = "day " + std::to_string(d->action.date->day);
        return r;
      }
      r.state = Resolution::State::Ready;
      r.pc = pc;
      r.action = &d->action;
      return r;
    }
    if (const auto* w = std::get_if<instr::Wait>(&in)) {
      if (fired(w->trigger, world)) {
        ++pc;
        continue;
      }
      r.state = Resolution::State::Blocked;
      r.pc = pc;
      if (const auto* by = std::get_if<trig::ByDate>(&w->trigger)) r.wake = by->date;
      r.waiting_for = describe(w->trigger);
      return r;
    }
    if (const auto* j = std::get_if<instr::JumpUnless>(&in)) {
      pc = holds(j->condition, world) ? pc + 1 : j->target;
      continue;
    }
    if (const auto* j = std::get_if<instr::Jump>(&in)) {
      pc = j->target;
      continue;
    }
    break;  // Halt
  }
  r.state = Resolution::State::Finished;
  r.pc = code.size();
  return r;
}

void collect_contract_refs(const Trigger& t, std::vector<ContractId>& out) {
  std::visit(overloaded{
                 [&](const trig::AfterEvent& e) {
                   if (e.pattern.contract) out.push_back(*e.pattern.contract);
                 },
                 [&](const trig::ConditionMet& c) {
                   if (const auto* s = std::get_if<cond::StageAtLeast>(&c.condition)) out.push_back(s->contract);
                   if (const auto* s = std::get_if<cond::SignedBy>(&c.condition)) out.push_back(s->contract);
                 },
                 [](const auto&) {},
             },
             t);
}

void scan_steps(const std::vector<PlanStep>& steps, std::set<ContractId>& created, std::vector<ContractId>& cited) {
  for (const auto& s : steps) {
    if (const auto* d = std::get_if<step::Do>(&s.value)) {
      const Action& a = d->action;
      const bool creates = is_promise(a.kind) || a.kind == ActionKind::BuyOnCredit ||
                           a.kind == ActionKind::PrepareContract ||
                           (a.kind == ActionKind::SignContract && a.draft);
      if (creates) {
        if (!a.contract.empty()) created.insert(a.contract);
        if (a.draft && !a.draft->id.empty()) created.insert(a.draft->id);
      } else if (!a.contract.empty()) {
        cited.push_back(a.contract);
      }
      cited.insert(cited.end(), a.reason.contracts.begin(), a.reason.contracts.end());
    } else if (const auto* w = std::get_if<step::WaitFor>(&s.value)) {
      collect_contract_refs(w->trigger, cited);
    } else if (const auto* b = std::get_if<step::Branch>(&s.value)) {
      collect_contract_refs(trig::ConditionMet{b->condition}, cited);
      scan_steps(b->then_steps, created, cited);
      scan_steps(b->else_steps, created, cited);
    }
  }
}

WorldState install(const WorldState& world, const std::vector<Plan>& plans) {
  WorldState w = world;
  w.plans.clear();
  std::set<ContractId> created;
  std::vector<ContractId> cited;
  for (const auto& p : plans) {
    if (!w.ground.agents.count(p.agent)) {
      throw Error(ErrorCode::UnknownReference, "plan for unknown agent '" + p.agent + "'");
    }
    if (w.plans.count(p.agent)) throw Error(ErrorCode::Precondition, "two plans for agent '" + p.agent + "'");
    w.plans.emplace(p.agent, make_cursor(p));
    scan_steps(p.steps, created, cited);
  }
  for (const auto& id : cited) {
    if (!w.contracts.count(id) && !created.count(id)) {
      throw Error(ErrorCode::UnknownReference, "plan cites contract '" + id + "' that no step creates");
    }
  }
  return w;
}

struct Scheduler {
  WorldState world;
  Progression prog;
  Date horizon;

  void step(const AgentId& agent, const Resolution& r, std::size_t cycle) {
    world = apply_event(std::move(world), *r.action, world.now);
    world.plans.at(agent).pc = r.pc + 1;
    const Event& ev = world.history.back();
    prog.events.push_back(ev);
    prog.turns.push_back(Turn{cycle, agent, ev.seq});
  }

  // Called when nothing is ready. Returns false when every plan has finished.
  bool unblock(const std::map<AgentId, Resolution>& res) {
    std::optional<Date> wake;
    std::vector<BlockedPlan> blocked;
    for (const auto& [agent, r] : res) {
      if (r.state != Resolution::State::Blocked) continue;
      blocked.push_back(BlockedPlan{agent, r.waiting_for});
      if (r.wake && *r.wake > world.now && (!wake || *r.wake < *wake)) wake = r.wake;
    }
    if (blocked.empty()) return false;
    if (!wake) {
      prog.final_world = world;
      prog.status = RunStatus::Deadlocked;
      throw DeadlockError(std::move(blocked), std::move(prog));
    }
    if (*wake > horizon) {
      prog.final_world = world;
      throw HorizonError(*wake, horizon, std::move(prog));
    }
    world = advance_clock(std::move(world), *wake);
    return true;
  }

  std::map<AgentId, Resolution> resolve_all() const {
    std::map<AgentId, Resolution> out;
    for (const auto& [agent, cursor] : world.plans) out.emplace(agent, resolve(cursor, world));
    return out;
  }
};

Progression run_round_robin(Scheduler s) {
  for (std::size_t cycle = 0;; ++cycle) {
    bool progressed = false;
    std::vector<AgentId> order;
    for (const auto& [agent, _] : s.world.plans) order.push_back(agent);
    for (const auto& agent : order) {
      Resolution r = resolve(s.world.plans.at(agent), s.world);
      if (r.state == Resolution::State::Ready) {
        s.step(agent, r, cycle);
        progressed = true;
      } else if (r.state == Resolution::State::Finished) {
        s.world.plans.at(agent).pc = r.pc;
      }
    }
    if (!progressed && !s.unblock(s.resolve_all())) break;
  }
  s.prog.final_world = std::move(s.world);
  return std::move(s.prog);
}

Progression run_seeded(Scheduler s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t turn = 0;; ++turn) {
    auto res = s.resolve_all();
    std::vector<AgentId> ready;
    for (const auto& [agent, r] : res) {
      if (r.state == Resolution::State::Ready) ready.push_back(agent);
    }
    if (ready.empty()) {
      if (!s.unblock(res)) break;
      continue;
    }
    // Plain modulo keeps the choice identical across standard libraries.
    const AgentId& pick = ready[rng() % ready.size()];
    s.step(pick, res.at(pick), turn);
  }
  for (auto& [agent, cursor] : s.world.plans) cursor.pc = cursor.code ? cursor.code->size() : 0;
  s.prog.final_world = std::move(s.world);
  return std::move(s.prog);
}

struct Enumerator {
  Date horizon;
  std::map<std::string, Progression> found;  // keyed by trace

  void explore(WorldState world, Progression prog) {
    std::map<AgentId, Resolution> res;
    for (const auto& [agent, cursor] : world.plans) res.emplace(agent, resolve(cursor, world));

    bool any_ready = false;
    for (const auto& [agent, r] : res) {
      if (r.state != Resolution::State::Ready) continue;
      any_ready = true;
      WorldState next = apply_event(world, *r.action, world.now);
      next.plans.at(agent).pc = r.pc + 1;
      Progression p = prog;
      p.events.push_back(next.history.back());
      p.turns.push_back(Turn{p.turns.size(), agent, next.history.back().seq});
      explore(std::move(next), std::move(p));
    }
    if (any_ready) return;

    std::optional<Date> wake;
    bool blocked = false;
    for (const auto& [agent, r] : res) {
      if (r.state != Resolution::State::Blocked) continue;
      blocked = true;
      if (r.wake && *r.wake > world.now && (!wake || *r.wake < *wake)) wake = r.wake;
    }
    if (blocked && wake && *wake <= horizon) {
      explore(advance_clock(std::move(world), *wake), std::move(prog));
      return;
    }
    prog.status = blocked ? RunStatus::Deadlocked : RunStatus::Completed;
    for (auto& [agent, cursor] : world.plans) {
      if (res.at(agent).state == Resolution::State::Finished) cursor.pc = res.at(agent).pc;
    }
    prog.final_world = std::move(world);
    std::string key = trace_key(prog.events) + (prog.status == RunStatus::Deadlocked ? "|deadlock" : "");
    found.emplace(std::move(key), std::move(prog));
  }
};

}  // namespace

DeadlockError::DeadlockError(std::vector<BlockedPlan> blocked, Progression partial)
    : Error(ErrorCode::DeadlockDetected,
            [&] {
              std::ostringstream os;
              os << "no plan can proceed;";
              for (const auto& b : blocked) os << " " << b.agent << " waits for " << b.waiting_for << ";";
              return os.str();
            }()),
      blocked_(std::move(blocked)),
      partial_(std::move(partial)) {}

HorizonError::HorizonError(Date needed, Date horizon, Progression partial)
    : Error(ErrorCode::HorizonExceeded, "plans need day " + std::to_string(needed.day) + " beyond horizon day " +
                                            std::to_string(horizon.day)),
      partial_(std::move(partial)) {}

std::string_view to_string(RunStatus s) { return s == RunStatus::Completed ? "Completed" : "Deadlocked"; }

std::string trace_key(const std::vector<Event>& events) {
  std::ostringstream os;
  for (const auto& e : events) {
    os << e.date.day << ":" << describe(e.action);
    for (const auto& c : e.action.reason.contracts) os << "@" << c;
    os << ";";
  }
  return os.str();
}

Progression run(const WorldState& world, const std::vector<Plan>& plans, const ScheduleStrategy& strategy,
                Date horizon) {
  if (horizon < world.now) throw Error(ErrorCode::Precondition, "horizon lies before the current date");
  if (std::holds_alternative<strategy::Exhaustive>(strategy)) {
    std::size_t total = 0;
    for (const auto& p : plans) total += count_actions(p);
    auto all = enumerate_interleavings(world, plans, total, horizon);
    if (all.empty()) return Progression{{}, install(world, plans), {}, RunStatus::Completed, {}};
    return std::move(all.front());
  }
  Scheduler s{install(world, plans), {}, horizon};
  if (const auto* r = std::get_if<strategy::SeededRandom>(&strategy)) return run_seeded(std::move(s), r->seed);
  return run_round_robin(std::move(s));
}

std::vector<Progression> enumerate_interleavings(const WorldState& world, const std::vector<Plan>& plans,
                                                 std::size_t bound, Date horizon) {
  std::size_t total = 0;
  for (const auto& p : plans) total += count_actions(p);
  if (total > bound) {
    throw Error(ErrorCode::BoundExceeded,
                "plans hold " + std::to_string(total) + " actions, bound is " + std::to_string(bound));
  }
  const WorldState base = install(world, plans);
  const auto& points = base.choice_points;
  if (points.size() > 16) throw Error(ErrorCode::BoundExceeded, "too many choice points");

  Enumerator en{horizon, {}};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << points.size()); ++mask) {
    WorldState w = base;
    std::map<std::string, bool> choices;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const bool v = (mask >> (points.size() - 1 - i)) & 1U;
      w.ground.flags[points[i]] = v;
      choices[points[i]] = v;
    }
    Progression p;
    p.choices = choices;
    en.explore(std::move(w), std::move(p));
  }
  std::vector<Progression> out;
  out.reserve(en.found.size());
  for (auto& [_, p] : en.found) out.push_back(std::move(p));
  return out;
}

Progression run_sequence(const WorldState& world, const std::vector<Action>& actions) {
  WorldState w = world;
  Progression prog;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    w = apply_event(std::move(w), actions[i], w.now);
    prog.events.push_back(w.history.back());
    prog.turns.push_back(Turn{i, actions[i].actor, w.history.back().seq});
  }

  struct Open {
    Date due;
    ContractId id;
    Action pay;
  };
  std::vector<Open> open;
  for (const auto& [id, c] : w.contracts) {
    if (c.kind != "credit-sale" || c.stage == Stage::Honoured || c.clauses.empty()) continue;
    const Clause& cl = c.clauses.front();
    open.push_back(Open{cl.deadline.value_or(w.now), id, cl.action});
  }
  std::sort(open.begin(), open.end(), [](const Open& a, const Open& b) {
    return std::tie(a.due.day, a.id) < std::tie(b.due.day, b.id);
  });
  for (auto& o : open) {
    if (o.due > w.now) w = advance_clock(std::move(w), o.due);
    o.pay.date = o.due;
    w = apply_event(std::move(w), o.pay, w.now);
    prog.events.push_back(w.history.back());
    prog.turns.push_back(Turn{prog.turns.size(), o.pay.actor, w.history.back().seq});
  }
  prog.final_world = std::move(w);
  return prog;
}

bool round_robin_fair(const Progression& prog) {
  const auto& turns = prog.turns;
  std::map<std::pair<std::size_t, AgentId>, int> per_cycle;
  for (const auto& t : turns) {
    if (++per_cycle[{t.cycle, t.agent}] > 1) return false;
  }
  for (std::size_t i = 0; i < turns.size(); ++i) {
    for (std::size_t j = i + 1; j < turns.size(); ++j) {
      if (turns[j].agent != turns[i].agent) continue;
      if (turns[j].cycle == turns[i].cycle + 1) {
        std::map<AgentId, int> between;
        for (std::size_t k = i + 1; k < j; ++k) {
          if (++between[turns[k].agent] > 1) return false;
        }
      }
      break;
    }
  }
  return true;
}

}  // namespace rpsf
