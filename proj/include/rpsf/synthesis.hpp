#pragma once

#include "rpsf/flow.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace rpsf {

enum class Primitive { SpotSale, CreditSale, PrepareGood, PrepareContract, SignContract, Inform };

/// Largest accepted search bound.
inline constexpr std::size_t kSynthesisLimit = 7;

struct SynthesisConfig {
  std::set<Primitive> catalogue;
  std::size_t bound = 6;
  Perspective perspective;
};

struct Witness {
  std::vector<Action> actions;  // without the settlement payments
  Progression progression;      // including them
};

struct SynthesisResult {
  bool found = false;
  std::vector<Witness> witnesses;
  std::uint64_t explored = 0;  // executed candidate sequences, the empty one included
  std::size_t bound = 0;
  std::vector<std::string> reductions;  // search-space reductions that were applied
};

/// The full primitive catalogue.
std::set<Primitive> all_primitives();

/// Agents X (saver), Y (bank) and Z (broker) with ample cash, and a good S
/// held by Z whose value is the largest amount in the target.
WorldState synthesis_seed(const FlowTrace& target, std::size_t bound);

/// Depth-first search over sequences of monetary primitives up to the bound.
/// Every sequence is executed and its open credit sales settled on their due
/// dates. A witness matches the target under the perspective and returns
/// every good to its first owner. Throws BoundExceeded above the limit.
SynthesisResult synthesize(const FlowTrace& target, const SynthesisConfig& config);

/// Plans that replay a witness in order, one agent per action, so that the
/// witness can be stored and re-run as a scenario.
std::vector<Plan> witness_plans(const Witness& witness);

std::string_view to_string(Primitive p);
std::optional<Primitive> primitive_from_string(std::string_view s);

}  // namespace rpsf
