#include "rpsf/flow.hpp"
#include "rpsf/legality.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <set>

using namespace rpsf;

namespace {

Progression run_default(const ScenarioInstance& s) {
  return run(s.initial, s.plans, strategy::RoundRobin{}, s.horizon);
}

Verdict verdict_of(const std::string& position, const std::string& scenario, const Params& params = {}) {
  const ScenarioInstance s = instantiate(scenario, params);
  return judge(*find_position(position), s, run_default(s)).verdict;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Precondition;
}

}  // namespace

TEST(Positions, BuiltinsExist) {
  for (const char* n : {"CONVENTIONAL", "STRICT_DESCRIPTIVE", "STRICT_FUNCTIONAL", "MAJORITY", "MALAYSIA"}) {
    ASSERT_NE(find_position(n), nullptr) << n;
  }
  EXPECT_TRUE(find_position("CONVENTIONAL")->rules.empty());
  EXPECT_EQ(find_position("STRICT_FUNCTIONAL")->mode, PositionMode::Functional);
  EXPECT_EQ(find_position("nope"), nullptr);
}

TEST(Judge, EveryBuiltinMatchesItsExpectedVerdicts) {
  for (const auto& spec : catalogue()) {
    const ScenarioInstance s = instantiate(spec.name);
    const Progression pr = run_default(s);
    for (const auto& [pos, want] : s.expected) {
      EXPECT_EQ(judge(*find_position(pos), s, pr).verdict, want) << spec.name << " under " << pos;
    }
  }
}

TEST(Judge, ConventionalAllowsEverything) {
  for (const auto& spec : catalogue()) EXPECT_EQ(verdict_of("CONVENTIONAL", spec.name), Verdict::Halal) << spec.name;
}

TEST(Judge, DescriptiveVersusFunctional) {
  EXPECT_EQ(verdict_of("STRICT_DESCRIPTIVE", "savings_account_with_interest"), Verdict::Haram);
  EXPECT_EQ(verdict_of("STRICT_DESCRIPTIVE", "tawarruq_pi_double_prime"), Verdict::Halal);
  EXPECT_EQ(verdict_of("STRICT_FUNCTIONAL", "tawarruq_pi_double_prime"), Verdict::Haram);
  EXPECT_EQ(verdict_of("STRICT_FUNCTIONAL", "savings_account_with_interest"), Verdict::Haram);
}

TEST(Judge, SaleRepurchaseSchools) {
  EXPECT_EQ(verdict_of("MAJORITY", "ina_two_party"), Verdict::Haram);
  EXPECT_EQ(verdict_of("MALAYSIA", "ina_two_party"), Verdict::Halal);
  EXPECT_EQ(verdict_of("MALAYSIA", "ina_two_party", {{"single_contract", 1}}), Verdict::Haram);
  EXPECT_EQ(verdict_of("MAJORITY", "tawarruq_classic"), Verdict::Halal);
}

TEST(Judge, RibaReasonCitesEvents) {
  const ScenarioInstance s = instantiate("savings_account_with_interest");
  const Progression pr = run_default(s);
  const Judgement j = judge(*find_position("STRICT_DESCRIPTIVE"), s, pr);
  ASSERT_EQ(j.verdict, Verdict::Haram);
  ASSERT_FALSE(j.reasons.empty());
  EXPECT_EQ(j.reasons[0].rule, "riba");
  EXPECT_FALSE(j.reasons[0].events.empty());
}

TEST(Judge, EvidenceReferencesExistingEvents) {
  for (const auto& spec : catalogue()) {
    const ScenarioInstance s = instantiate(spec.name);
    const Progression pr = run_default(s);
    std::set<SeqNo> seqs;
    for (const auto& e : pr.final_world.history) seqs.insert(e.seq);
    for (const auto& pos : builtin_positions()) {
      const Judgement j = judge(pos, s, pr);
      if (j.verdict != Verdict::Halal) EXPECT_FALSE(j.reasons.empty()) << spec.name << " " << pos.name;
      for (const auto& r : j.reasons) {
        for (SeqNo n : r.events) EXPECT_TRUE(seqs.count(n)) << spec.name << " " << pos.name << " #" << n;
        for (const auto& c : r.contracts) EXPECT_TRUE(pr.final_world.contracts.count(c)) << c;
      }
    }
  }
}

TEST(Judge, IsDeterministic) {
  const ScenarioInstance s = instantiate("unethical_examples");
  const Progression pr = run_default(s);
  for (const auto& pos : builtin_positions()) {
    const Judgement a = judge(pos, s, pr), b = judge(pos, s, pr);
    EXPECT_EQ(a.verdict, b.verdict);
    ASSERT_EQ(a.reasons.size(), b.reasons.size());
    for (std::size_t i = 0; i < a.reasons.size(); ++i) EXPECT_EQ(a.reasons[i].events, b.reasons[i].events);
  }
}

TEST(Judge, EthicalTagsAreHaramDescriptively) {
  for (const char* n : {"unethical_rain", "unethical_used_car", "unethical_extortion", "unethical_interest_pair"}) {
    EXPECT_EQ(verdict_of("STRICT_DESCRIPTIVE", n), Verdict::Haram) << n;
  }
}

TEST(Judge, VerdictsSurviveScaling) {
  for (const Quantity factor : {Quantity(3), Quantity(1, 7), Quantity(1000), Quantity(5, 2)}) {
    for (const auto& spec : catalogue()) {
      Params scaled;
      const ScenarioInstance base = instantiate(spec.name);
      for (const auto& ps : spec.params) {
        if (ps.kind == ParamKind::Money && ps.default_value) scaled[ps.name] = *ps.default_value * factor;
      }
      const ScenarioInstance s = instantiate(spec.name, scaled);
      const Progression pr0 = run_default(base), pr1 = run_default(s);
      for (const auto& pos : builtin_positions()) {
        EXPECT_EQ(judge(pos, base, pr0).verdict, judge(pos, s, pr1).verdict)
            << spec.name << " x" << factor.to_string() << " under " << pos.name;
      }
    }
  }
}

TEST(Riba, LoanOfHundredRepaidWithHundredTen) {
  const ScenarioInstance s = instantiate("loan_with_interest");
  const Progression pr = run_default(s);
  const auto found = detect_riba(pr.final_world.contracts, pr.final_world.history);
  ASSERT_EQ(found.size(), 1U);
  EXPECT_EQ(found[0].principal, Quantity(100));
  EXPECT_EQ(found[0].repayment, Quantity(110));
  EXPECT_EQ(found[0].increment(), Quantity(10));
  EXPECT_EQ(found[0].duration, Duration{365});
  EXPECT_EQ(found[0].link, "L");
  EXPECT_LT(found[0].out_seq, found[0].back_seq);
}

TEST(Riba, NoRateMeansNoFinding) {
  const ScenarioInstance s = instantiate("savings_account_with_interest", {{"q", 0}});
  const Progression pr = run_default(s);
  EXPECT_TRUE(detect_riba(pr.final_world.contracts, pr.final_world.history).empty());
  EXPECT_EQ(judge(*find_position("STRICT_DESCRIPTIVE"), s, pr).verdict, Verdict::Halal);
}

TEST(Riba, ClassicTawarruqHasNone) {
  const Progression pr = run_default(instantiate("tawarruq_classic"));
  EXPECT_TRUE(detect_riba(pr.final_world.contracts, pr.final_world.history).empty());
}

TEST(Ina, SeparateContracts) {
  const Progression pr = run_default(instantiate("ina_two_party"));
  const auto found = detect_ina(pr.final_world.history);
  ASSERT_EQ(found.size(), 1U);
  EXPECT_FALSE(found[0].single_contract);
  EXPECT_LT(found[0].first_seq, found[0].second_seq);
}

TEST(Ina, SingleContract) {
  const Progression pr = run_default(instantiate("ina_two_party", {{"single_contract", 1}}));
  const auto found = detect_ina(pr.final_world.history);
  ASSERT_EQ(found.size(), 1U);
  EXPECT_TRUE(found[0].single_contract);
}

TEST(Ina, ThirdPartyOrNoSales) {
  EXPECT_TRUE(detect_ina(run_default(instantiate("tawarruq_classic")).final_world.history).empty());
  EXPECT_TRUE(detect_ina(HistoryLog{}).empty());
}

TEST(LoanProfile, MurabahaIsNotALoanShape) {
  const ScenarioInstance s = instantiate("murabaha");
  EXPECT_TRUE(detect_loan_profile(s.initial, run_default(s)).empty());
  const ScenarioInstance t = instantiate("tawarruq_pi_prime");
  const auto found = detect_loan_profile(t.initial, run_default(t));
  ASSERT_FALSE(found.empty());
  EXPECT_EQ(found[0].lender, "X");
}

TEST(EffectiveRate, Examples) {
  EXPECT_EQ(effective_interest_rate(100, 110, Duration{365}), Quantity(1, 10));
  EXPECT_EQ(effective_interest_rate(100, 100, Duration{30}), Quantity(0));
  EXPECT_EQ(effective_interest_rate(100, 105, Duration{182}), Quantity(5 * 365, 100 * 182));
}

TEST(EffectiveRate, ContractusTrinusIsTenPercent) {
  const ScenarioInstance s = instantiate("contractus_trinus");
  const NetPosition pos = net_position(monetary_projection(run_default(s)));
  const Quantity gain = net_gain(pos, *s.lender);
  EXPECT_EQ(effective_interest_rate(*s.principal, *s.principal + gain, *s.term), Quantity(1, 10));
}

TEST(EffectiveRate, RecoversTheRate) {
  for (const Quantity p : {Quantity(1), Quantity(100), Quantity(7, 3), Quantity(123456789)}) {
    for (const Quantity q : {Quantity(0), Quantity(1, 20), Quantity(3, 7), Quantity(2)}) {
      EXPECT_EQ(effective_interest_rate(p, p * (Quantity(1) + q), Duration{365}), q);
    }
  }
}

TEST(EffectiveRate, Errors) {
  EXPECT_EQ(code_of([] { (void)effective_interest_rate(0, 10, Duration{365}); }), ErrorCode::NonpositivePrincipal);
  EXPECT_EQ(code_of([] { (void)effective_interest_rate(-5, 10, Duration{365}); }), ErrorCode::NonpositivePrincipal);
  EXPECT_EQ(code_of([] { (void)effective_interest_rate(100, 110, Duration{0}); }), ErrorCode::ZeroDuration);
}

TEST(Names, RoundTrip) {
  for (Detector d : {Detector::Riba, Detector::InaAny, Detector::InaSingleContract, Detector::ContingentOnChance,
                     Detector::UndisclosedInformation, Detector::Coercion, Detector::UnvaluedGoods,
                     Detector::FunctionalLoan}) {
    EXPECT_EQ(detector_from_string(to_string(d)), d);
  }
  EXPECT_EQ(position_mode_from_string("functional"), PositionMode::Functional);
  EXPECT_FALSE(detector_from_string("astrology"));
}
