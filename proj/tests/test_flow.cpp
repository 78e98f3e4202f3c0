#include "rpsf/flow.hpp"
#include "rpsf/scenarios.hpp"

#include <gtest/gtest.h>

using namespace rpsf;

namespace {

FlowTrace flows_of(const std::string& name, const Params& params = {}) {
  const ScenarioInstance s = instantiate(name, params);
  return monetary_projection(run(s.initial, s.plans, strategy::RoundRobin{}, s.horizon));
}

}  // namespace

TEST(Projection, ClassicTawarruq) {
  const FlowTrace got = flows_of("tawarruq_classic");
  const FlowTrace want = make_trace({Flow{"X", "Z", 100, Date{0}}, Flow{"Z", "Y", 100, Date{0}},
                                     Flow{"Y", "X", 110, Date{365}}});
  EXPECT_EQ(got, want);
}

TEST(Projection, EmptyProgression) {
  EXPECT_TRUE(monetary_projection(std::vector<Event>{}).flows.empty());
}

TEST(Projection, DropsNonMonetaryEventsAndZeroAmounts) {
  Event inform{1, Date{0}, Action{}, ""};
  inform.action.kind = ActionKind::Inform;
  Event zero{2, Date{0}, Action{}, ""};
  zero.action.kind = ActionKind::Pay;
  zero.action.actor = "X";
  zero.action.counterparty = "Y";
  EXPECT_TRUE(monetary_projection(std::vector<Event>{inform, zero}).flows.empty());
}

TEST(Projection, PiPrimeNetsToMinusPOnDayZero) {
  const NetPosition pos = net_position(flows_of("tawarruq_pi_prime"));
  const auto& x = pos.at("X");
  EXPECT_EQ(x.at(Date{0}), Quantity(-1000));
  EXPECT_EQ(x.at(Date{365}), Quantity(1048));
  EXPECT_EQ(x.size(), 2U);
}

TEST(Projection, PiPrimeWithExplicitPriceStillNetsToMinusP) {
  const NetPosition pos = net_position(flows_of("tawarruq_pi_prime", {{"p_prime", 1500}}));
  EXPECT_EQ(pos.at("X").at(Date{0}), Quantity(-1000));
}

TEST(Equivalence, TawarruqSynthesizesTheLoan) {
  const FlowTrace tawarruq = flows_of("tawarruq_classic");
  const FlowTrace loan = flows_of("loan_with_interest");
  EXPECT_TRUE(equivalent(tawarruq, loan, Perspective{{"X", "Y"}}));
  // Z's legs cancel on day 0, so the loan is matched for everyone.
  EXPECT_TRUE(equivalent(tawarruq, loan, Perspective::everyone()));
  EXPECT_FALSE(equivalent(tawarruq, flows_of("loan_with_interest", {{"i", 11}}), Perspective{{"X"}}));
}

TEST(Equivalence, PiPrimeAgainstSavingsAccount) {
  const FlowTrace pi = flows_of("tawarruq_pi_prime");
  const FlowTrace savings = flows_of("savings_account_with_interest");
  EXPECT_TRUE(equivalent(pi, savings, Perspective{{"X"}}));
  EXPECT_FALSE(equivalent(pi, savings, Perspective::everyone()));
}

TEST(Equivalence, IsAnEquivalenceRelation) {
  std::vector<FlowTrace> traces;
  for (const auto& spec : catalogue()) traces.push_back(flows_of(spec.name));
  traces.push_back(flows_of("tawarruq_classic", {{"p", 200}}));
  const std::vector<Perspective> views = {Perspective::everyone(), Perspective{{"X"}}, Perspective{{"X", "Y"}}};
  for (const auto& view : views) {
    for (const auto& a : traces) {
      EXPECT_TRUE(equivalent(a, a, view));
      for (const auto& b : traces) {
        EXPECT_EQ(equivalent(a, b, view), equivalent(b, a, view));
        for (const auto& c : traces) {
          if (equivalent(a, b, view) && equivalent(b, c, view)) EXPECT_TRUE(equivalent(a, c, view));
        }
      }
    }
  }
}

TEST(NetPositions, ConserveMoneyOnEveryBuiltin) {
  for (const auto& spec : catalogue()) EXPECT_TRUE(conserves(net_position(flows_of(spec.name)))) << spec.name;
}

TEST(NetPositions, NetGain) {
  const NetPosition pos = net_position(flows_of("tawarruq_classic"));
  EXPECT_EQ(net_gain(pos, "X"), Quantity(10));
  EXPECT_EQ(net_gain(pos, "Y"), Quantity(-10));
  EXPECT_EQ(net_gain(pos, "Z"), Quantity(0));
  EXPECT_EQ(net_gain(pos, "nobody"), Quantity(0));
}
