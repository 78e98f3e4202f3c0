#pragma once

#include "rpsf/plan.hpp"
#include "rpsf/world.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rpsf {

enum class ParamKind { Money, Rate, Days, Flag, Choice };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::Money;
  std::optional<Quantity> default_value;  // unset: derived from the others
  std::string help;
};

struct ScenarioSpec {
  std::string name;
  std::string summary;
  std::string anchor;  // topic the product illustrates
  std::vector<ParamSpec> params;
};

using Params = std::map<std::string, Quantity>;

/// A ready-to-run product: initial world, plans and what the catalogue
/// expects legal positions to say about it.
struct ScenarioInstance {
  std::string name;
  std::string anchor;
  Params params;
  WorldState initial;
  std::vector<Plan> plans;
  std::vector<AgentId> principals;
  Date horizon;
  /// Lender-side summary used for effective-rate checks.
  std::optional<AgentId> lender;
  std::optional<Quantity> principal;
  std::optional<Duration> term;
  std::map<std::string, Verdict> expected;  // position name -> verdict
};

const std::vector<ScenarioSpec>& catalogue();
const ScenarioSpec* find_scenario(std::string_view name);

/// Builds a catalogue scenario. Unknown names throw UnknownScenario; unknown
/// or inconsistent parameters throw ParameterViolation.
ScenarioInstance instantiate(std::string_view name, const Params& overrides = {});

/// Smallest multiple of `block` that is at least `price`.
Quantity smallest_block_multiple(const Quantity& price, const Quantity& block);

/// Parses "key=value" with an exact quantity value.
std::pair<std::string, Quantity> parse_param(std::string_view text);

std::string_view to_string(ParamKind k);

}  // namespace rpsf
