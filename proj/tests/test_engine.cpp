#include "rpsf/engine.hpp"
#include "rpsf/scenarios.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

using namespace rpsf;

namespace {

Action pay(const AgentId& from, const AgentId& to, Quantity sum) {
  Action a;
  a.kind = ActionKind::Pay;
  a.actor = from;
  a.counterparty = to;
  a.sum = sum;
  return a;
}

// k agents A0..A(k-1), each paying the sink S a distinct amount per step.
struct Independent {
  WorldState world;
  std::vector<Plan> plans;
};

Independent independent(const std::vector<std::size_t>& lengths) {
  Independent in;
  add_agent(in.world, "S", Role::Company);
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    const AgentId id = "A" + std::to_string(k);
    add_agent(in.world, id, Role::Person, 1000);
    Plan p{id, {}};
    for (std::size_t j = 0; j < lengths[k]; ++j) {
      p.steps.push_back(do_(pay(id, "S", static_cast<std::int64_t>(k * 100 + j + 1))));
    }
    in.plans.push_back(p);
  }
  return in;
}

// Brute-force count of interleavings: walk every choice of which plan moves.
std::size_t count_paths(std::vector<std::size_t> remaining) {
  if (std::all_of(remaining.begin(), remaining.end(), [](std::size_t r) { return r == 0; })) return 1;
  std::size_t total = 0;
  for (auto& r : remaining) {
    if (r == 0) continue;
    --r;
    total += count_paths(remaining);
    ++r;
  }
  return total;
}

std::size_t multinomial(const std::vector<std::size_t>& lengths) {
  std::size_t n = 0;
  std::size_t out = 1;
  for (std::size_t len : lengths) {
    for (std::size_t j = 1; j <= len; ++j) {
      ++n;
      out = out * n / j;
    }
  }
  return out;
}

std::vector<std::string> actor_trace(const Progression& pr, const AgentId& agent) {
  std::vector<std::string> out;
  for (const auto& e : pr.events) {
    if (e.action.actor == agent) out.push_back(describe(e.action));
  }
  return out;
}

// Sequence number of the signature that made `contract` Active.
SeqNo activation(const Progression& pr, const ContractId& contract) {
  const std::size_t parties = pr.final_world.contract(contract).parties.size();
  std::size_t seen = 0;
  for (const auto& e : pr.events) {
    if (e.action.kind == ActionKind::SignContract && e.action.contract == contract && ++seen == parties) return e.seq;
  }
  return 0;
}

}  // namespace

TEST(Enumerate, TwoIndependentTwoStepPlansGiveSix) {
  const Independent in = independent({2, 2});
  EXPECT_EQ(enumerate_interleavings(in.world, in.plans, 8).size(), 6U);
}

TEST(Enumerate, OnePlanGivesOne) {
  const Independent in = independent({4});
  EXPECT_EQ(enumerate_interleavings(in.world, in.plans, 8).size(), 1U);
}

TEST(Enumerate, EmptyPlanSetGivesTheEmptyProgression) {
  const Independent in = independent({});
  const auto all = enumerate_interleavings(in.world, in.plans, 8);
  ASSERT_EQ(all.size(), 1U);
  EXPECT_TRUE(all[0].events.empty());
}

TEST(Enumerate, MatchesMultinomialAndBruteForce) {
  const std::vector<std::vector<std::size_t>> shapes = {{1, 1}, {3, 1}, {2, 3}, {1, 1, 1}, {2, 2, 2}, {3, 3, 2}, {4, 4},
                                                        {1, 2, 3, 2}};
  for (const auto& shape : shapes) {
    const Independent in = independent(shape);
    const auto all = enumerate_interleavings(in.world, in.plans, 8);
    EXPECT_EQ(all.size(), count_paths(shape));
    EXPECT_EQ(all.size(), multinomial(shape));
    std::set<std::string> keys;
    for (const auto& pr : all) keys.insert(trace_key(pr.events));
    EXPECT_EQ(keys.size(), all.size()) << "duplicates returned";
  }
}

TEST(Enumerate, CanonicalOrderIsStable) {
  const Independent in = independent({2, 1, 2});
  const auto a = enumerate_interleavings(in.world, in.plans, 8);
  const auto b = enumerate_interleavings(in.world, in.plans, 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(trace_key(a[i].events), trace_key(b[i].events));
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), [](const Progression& x, const Progression& y) {
    return trace_key(x.events) < trace_key(y.events);
  }));
}

TEST(Enumerate, PreservesPerPlanOrder) {
  const Independent in = independent({3, 2, 2});
  for (const auto& pr : enumerate_interleavings(in.world, in.plans, 8)) {
    for (const auto& plan : in.plans) {
      std::vector<std::string> want;
      for (const auto& s : plan.steps) want.push_back(describe(std::get<step::Do>(s.value).action));
      EXPECT_EQ(actor_trace(pr, plan.agent), want);
    }
  }
}

TEST(Enumerate, RejectsTooManySteps) {
  const Independent in = independent({3, 3});
  try {
    (void)enumerate_interleavings(in.world, in.plans, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BoundExceeded);
  }
}

TEST(Enumerate, TripleSignsInReverseOrder) {
  const ScenarioInstance s = instantiate("tawarruq_pi_triple_prime");
  const auto all = enumerate_interleavings(s.initial, s.plans, 32, s.horizon);
  ASSERT_FALSE(all.empty());
  for (const auto& pr : all) {
    const SeqNo c1 = activation(pr, "C1"), c2 = activation(pr, "C2"), c3 = activation(pr, "C3");
    ASSERT_GT(c3, 0U);
    EXPECT_LT(c3, c2);
    EXPECT_LT(c2, c1);
  }
}

TEST(Enumerate, BranchesOverChoicePoints) {
  const ScenarioInstance s = instantiate("brokered_loan");
  const auto all = enumerate_interleavings(s.initial, s.plans, 32, s.horizon);
  std::set<bool> seen;
  for (const auto& pr : all) seen.insert(pr.choices.at("lender_willing"));
  EXPECT_EQ(seen, (std::set<bool>{false, true}));
}

TEST(Run, EmptyPlanSetLeavesWorldUnchanged) {
  const Independent in = independent({});
  const Progression pr = run(in.world, {}, strategy::RoundRobin{});
  EXPECT_TRUE(pr.events.empty());
  EXPECT_EQ(pr.status, RunStatus::Completed);
  EXPECT_EQ(pr.final_world.ground.balances, in.world.ground.balances);
}

TEST(Run, ClassicTawarruqMakesTheRoundTrip) {
  const ScenarioInstance s = instantiate("tawarruq_classic");
  const Progression pr = run(s.initial, s.plans, strategy::RoundRobin{}, s.horizon);
  EXPECT_EQ(pr.events.size(), 10U);
  EXPECT_EQ(pr.final_world.good("S").owner, "Z");
  EXPECT_EQ(pr.final_world.balance("X") - s.initial.balance("X"), Quantity(10));
  EXPECT_EQ(pr.final_world.balance("Y") - s.initial.balance("Y"), Quantity(-10));
}

TEST(Run, CyclicWaitDeadlocks) {
  WorldState w;
  add_agent(w, "X", Role::Person, 10);
  add_agent(w, "Y", Role::Person, 10);
  EventPattern from_x{ActionKind::Pay, "X", "Y", std::nullopt, std::nullopt, std::nullopt};
  EventPattern from_y{ActionKind::Pay, "Y", "X", std::nullopt, std::nullopt, std::nullopt};
  const std::vector<Plan> plans = {Plan{"X", {wait_for(trig::AfterEvent{from_y}), do_(pay("X", "Y", 1))}},
                                   Plan{"Y", {wait_for(trig::AfterEvent{from_x}), do_(pay("Y", "X", 1))}}};
  try {
    (void)run(w, plans, strategy::RoundRobin{});
    FAIL() << "expected a deadlock";
  } catch (const DeadlockError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DeadlockDetected);
    ASSERT_EQ(e.blocked().size(), 2U);
    EXPECT_EQ(e.blocked()[0].agent, "X");
    EXPECT_FALSE(e.blocked()[0].waiting_for.empty());
    EXPECT_TRUE(e.partial().events.empty());
  }
}

TEST(Run, HorizonIsEnforced) {
  WorldState w;
  add_agent(w, "X", Role::Person, 10);
  add_agent(w, "Y", Role::Person, 10);
  Action late = pay("X", "Y", 1);
  late.date = Date{30};
  const std::vector<Plan> plans = {Plan{"X", {do_(pay("X", "Y", 1)), do_(late)}}};
  try {
    (void)run(w, plans, strategy::RoundRobin{}, Date{10});
    FAIL();
  } catch (const HorizonError& e) {
    EXPECT_EQ(e.code(), ErrorCode::HorizonExceeded);
    EXPECT_EQ(e.partial().events.size(), 1U);
  }
  EXPECT_EQ(run(w, plans, strategy::RoundRobin{}, Date{30}).final_world.now, Date{30});
}

TEST(Run, RoundRobinIsFairOnEveryBuiltin) {
  for (const auto& spec : catalogue()) {
    const ScenarioInstance s = instantiate(spec.name);
    const Progression pr = run(s.initial, s.plans, strategy::RoundRobin{}, s.horizon);
    EXPECT_EQ(pr.status, RunStatus::Completed) << spec.name;
    EXPECT_TRUE(round_robin_fair(pr)) << spec.name;
  }
}

TEST(Run, IsDeterministic) {
  for (const auto& spec : catalogue()) {
    const ScenarioInstance s = instantiate(spec.name);
    for (const ScheduleStrategy st : {ScheduleStrategy{strategy::RoundRobin{}}, ScheduleStrategy{strategy::SeededRandom{7}},
                                      ScheduleStrategy{strategy::Exhaustive{}}}) {
      const Progression a = run(s.initial, s.plans, st, s.horizon);
      const Progression b = run(s.initial, s.plans, st, s.horizon);
      EXPECT_EQ(trace_key(a.events), trace_key(b.events)) << spec.name;
    }
  }
}

TEST(Run, SeedsChangeTheInterleavingButNotThePlans) {
  const Independent in = independent({3, 3, 3});
  std::set<std::string> keys;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Progression pr = run(in.world, in.plans, strategy::SeededRandom{seed});
    keys.insert(trace_key(pr.events));
    for (const auto& plan : in.plans) EXPECT_EQ(actor_trace(pr, plan.agent).size(), 3U);
  }
  EXPECT_GT(keys.size(), 1U);
}

TEST(Run, ProgressionIsTheHistorySuffix) {
  const ScenarioInstance s = instantiate("murabaha");
  const Progression pr = run(s.initial, s.plans, strategy::RoundRobin{}, s.horizon);
  const auto& h = pr.final_world.history;
  ASSERT_GE(h.size(), pr.events.size());
  EXPECT_TRUE(std::equal(pr.events.begin(), pr.events.end(), h.end() - static_cast<std::ptrdiff_t>(pr.events.size()),
                         [](const Event& a, const Event& b) { return a.seq == b.seq; }));
}

TEST(Run, ReplayReproducesTheFinalWorld) {
  for (const auto& spec : catalogue()) {
    const ScenarioInstance s = instantiate(spec.name);
    const Progression pr = run(s.initial, s.plans, strategy::RoundRobin{}, s.horizon);
    const WorldState r = replay(s.initial, pr.events, pr.final_world.now);
    EXPECT_EQ(r.ground.balances, pr.final_world.ground.balances) << spec.name;
    for (const auto& [id, c] : pr.final_world.contracts) EXPECT_EQ(r.contract(id).stage, c.stage) << spec.name << " " << id;
  }
}

TEST(RunSequence, SettlesCreditSalesOnTheirDueDates) {
  WorldState w;
  add_agent(w, "X", Role::Person, 0);
  add_agent(w, "Y", Role::Bank, 200);
  add_good(w, Good{"S", "asset", "X", 100, 1, false});
  Action a;
  a.kind = ActionKind::BuyOnCredit;
  a.actor = "Y";
  a.counterparty = "X";
  a.good = "S";
  a.sum = 110;
  a.due = Date{365};
  const Progression pr = run_sequence(w, {a});
  ASSERT_EQ(pr.events.size(), 2U);
  EXPECT_EQ(pr.events[1].date, Date{365});
  EXPECT_EQ(pr.final_world.balance("X"), Quantity(110));
}
