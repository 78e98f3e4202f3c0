#include "rpsf/json_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

using namespace rpsf;

namespace {

template <class T>
T round_trip(const T& value) {
  return Json(value).get<T>();
}

Progression run_default(const ScenarioInstance& s) {
  return run(s.initial, s.plans, strategy::RoundRobin{}, s.horizon);
}

}  // namespace

TEST(Json, QuantitiesAreExactStrings) {
  EXPECT_EQ(Json(Quantity(1, 20)), Json("1/20"));
  EXPECT_EQ(Json(Quantity(-7)), Json("-7"));
  EXPECT_EQ(Json("3/9").get<Quantity>(), Quantity(1, 3));
  EXPECT_EQ(Json(42).get<Quantity>(), Quantity(42));
  EXPECT_THROW((void)Json(0.5).get<Quantity>(), std::exception);
}

TEST(Json, TriggersAndConditions) {
  const std::vector<Trigger> ts = {
      trig::Always{}, trig::ByDate{Date{12}},
      trig::AfterEvent{EventPattern{ActionKind::SpotSale, "X", "Z", "G", "C1", Quantity(5, 2)}},
      trig::ConditionMet{cond::Owns{"X", "G"}}, trig::ConditionMet{cond::StageAtLeast{"C", Stage::Active}},
      trig::ConditionMet{cond::BalanceAtLeast{"Y", 10}}, trig::ConditionMet{cond::FlagIs{"w", false}},
      trig::ConditionMet{cond::SignedBy{"C", "X"}}, trig::ConditionMet{cond::EventCountAtLeast{3}}};
  for (const auto& t : ts) {
    const Json j = t;
    EXPECT_EQ(Json(round_trip(t)), j);
    EXPECT_EQ(describe(round_trip(t)), describe(t));
  }
}

TEST(Json, WorldsOfEveryBuiltinRoundTrip) {
  for (const auto& spec : catalogue()) {
    const ScenarioInstance s = instantiate(spec.name);
    const Progression pr = run_default(s);
    for (const WorldState* w : {&s.initial, &pr.final_world}) {
      const Json j = *w;
      const WorldState back = j.get<WorldState>();
      EXPECT_EQ(Json(back), j) << spec.name;
      EXPECT_EQ(back.ground.balances, w->ground.balances);
      EXPECT_EQ(back.history.size(), w->history.size());
    }
    for (const auto& p : s.plans) EXPECT_EQ(Json(round_trip(p)), Json(p)) << spec.name;
  }
}

TEST(Json, ScenarioFilesReplayTheBuiltin) {
  for (const auto& spec : catalogue()) {
    const ScenarioInstance s = instantiate(spec.name);
    const ScenarioFile f = parse_scenario(scenario_json(s));
    EXPECT_EQ(trace_key(run_default(f.instance).events), trace_key(run_default(s).events)) << spec.name;
    EXPECT_EQ(f.instance.expected, s.expected) << spec.name;
  }
}

TEST(Json, ScenarioFileByBuiltinName) {
  const Json j = {{"format", kScenarioFormat}, {"builtin", "tawarruq_classic"}, {"params", Json::object({{"p", "200"}})}};
  const ScenarioFile f = parse_scenario(j);
  EXPECT_EQ(f.instance.params.at("p"), Quantity(200));
}

TEST(Json, ScenarioFileWithCustomPosition) {
  Json j = scenario_json(instantiate("ina_two_party"));
  j["positions"] = Json::array({{{"name", "SALES_ONLY"},
                                 {"mode", "descriptive"},
                                 {"rules", {{{"name", "ina"}, {"detector", "ina_any"}, {"verdict", "Undecided"}}}},
                                 {"default", "Halal"}}});
  const ScenarioFile f = parse_scenario(j);
  ASSERT_EQ(f.positions.size(), 1U);
  const Progression pr = run_default(f.instance);
  EXPECT_EQ(judge(f.positions[0], f.instance, pr).verdict, Verdict::Undecided);
}

TEST(Json, ScenarioFileErrors) {
  EXPECT_THROW((void)parse_scenario(Json{{"format", "other/2"}, {"builtin", "murabaha"}}), Error);
  EXPECT_THROW((void)parse_scenario(Json{{"format", kScenarioFormat}, {"builtin", "nope"}}), Error);
  EXPECT_THROW((void)load_scenario_file("/nonexistent/file.json"), Error);
}

TEST(Json, LoadFromDisk) {
  const std::string path = testing::TempDir() + "rpsf_json_test.json";
  {
    std::ofstream out(path);
    out << scenario_json(instantiate("murabaha")).dump(2);
  }
  const ScenarioFile f = load_scenario_file(path);
  EXPECT_EQ(f.instance.name, "murabaha");
  std::remove(path.c_str());
}

TEST(Json, JudgementsCarryEvidence) {
  const ScenarioInstance s = instantiate("savings_account_with_interest");
  const Judgement jd = judge(*find_position("STRICT_DESCRIPTIVE"), s, run_default(s));
  const Json j = jd;
  EXPECT_EQ(j.at("verdict"), "Haram");
  EXPECT_FALSE(j.at("reasons").at(0).at("events").empty());
  EXPECT_EQ(Json(round_trip(jd)), j);
}

TEST(Json, FlowTracesRoundTrip) {
  const FlowTrace t = monetary_projection(run_default(instantiate("tawarruq_pi_prime")));
  EXPECT_EQ(round_trip(t), t);
}
