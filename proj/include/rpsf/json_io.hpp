#pragma once

#include "rpsf/legality.hpp"
#include "rpsf/scenarios.hpp"
#include "rpsf/synthesis.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace rpsf {

using Json = nlohmann::json;

inline constexpr const char* kScenarioFormat = "rpsf-scenario/1";

void to_json(Json& j, const Quantity& q);
void from_json(const Json& j, Quantity& q);
void to_json(Json& j, const Date& d);
void from_json(const Json& j, Date& d);
void to_json(Json& j, const Reason& r);
void from_json(const Json& j, Reason& r);
void to_json(Json& j, const EventPattern& p);
void from_json(const Json& j, EventPattern& p);
void to_json(Json& j, const Condition& c);
void from_json(const Json& j, Condition& c);
void to_json(Json& j, const Trigger& t);
void from_json(const Json& j, Trigger& t);
void to_json(Json& j, const Good& g);
void from_json(const Json& j, Good& g);
void to_json(Json& j, const Action& a);
void from_json(const Json& j, Action& a);
void to_json(Json& j, const Clause& c);
void from_json(const Json& j, Clause& c);
void to_json(Json& j, const ContractRecord& c);
void from_json(const Json& j, ContractRecord& c);
void to_json(Json& j, const PlanStep& s);
void from_json(const Json& j, PlanStep& s);
void to_json(Json& j, const Plan& p);
void from_json(const Json& j, Plan& p);
void to_json(Json& j, const Event& e);
void from_json(const Json& j, Event& e);
void to_json(Json& j, const WorldState& w);
void from_json(const Json& j, WorldState& w);
void to_json(Json& j, const Flow& f);
void from_json(const Json& j, Flow& f);
void to_json(Json& j, const FlowTrace& t);
void from_json(const Json& j, FlowTrace& t);
void to_json(Json& j, const Progression& p);
void to_json(Json& j, const Finding& f);
void from_json(const Json& j, Finding& f);
void to_json(Json& j, const Judgement& jd);
void from_json(const Json& j, Judgement& jd);
void to_json(Json& j, const LegalPosition& p);
void from_json(const Json& j, LegalPosition& p);
void to_json(Json& j, const ScenarioSpec& s);

Json net_position_json(const NetPosition& pos);

/// A scenario file: a built-in with parameters, or a custom world with plans,
/// optionally with extra legal positions.
struct ScenarioFile {
  ScenarioInstance instance;
  std::vector<LegalPosition> positions;
};

ScenarioFile parse_scenario(const Json& j);
ScenarioFile load_scenario_file(const std::string& path);
Json scenario_json(const ScenarioInstance& instance, const std::vector<LegalPosition>& positions = {});

/// Each witness carries a scenario file that replays it from `seed`.
Json synthesis_json(const SynthesisResult& result, const WorldState& seed);

}  // namespace rpsf

// Condition and Trigger are std::variant aliases, which argument-dependent
// lookup does not associate with rpsf.
namespace nlohmann {
template <>
struct adl_serializer<rpsf::Condition> {
  static void to_json(json& j, const rpsf::Condition& c) { rpsf::to_json(j, c); }
  static void from_json(const json& j, rpsf::Condition& c) { rpsf::from_json(j, c); }
};
template <>
struct adl_serializer<rpsf::Trigger> {
  static void to_json(json& j, const rpsf::Trigger& t) { rpsf::to_json(j, t); }
  static void from_json(const json& j, rpsf::Trigger& t) { rpsf::from_json(j, t); }
};
}  // namespace nlohmann
