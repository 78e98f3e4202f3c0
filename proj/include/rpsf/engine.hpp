#pragma once

#include "rpsf/plan.hpp"
#include "rpsf/world.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace rpsf {

namespace strategy {
struct RoundRobin {};
struct SeededRandom {
  std::uint64_t seed = 0;
};
struct Exhaustive {};
}  // namespace strategy

using ScheduleStrategy = std::variant<strategy::RoundRobin, strategy::SeededRandom, strategy::Exhaustive>;

enum class RunStatus { Completed, Deadlocked };

/// One scheduler turn that produced an event.
struct Turn {
  std::size_t cycle = 0;
  AgentId agent;
  SeqNo seq = 0;
};

/// The executed trace of a run together with the world it ends in.
struct Progression {
  std::vector<Event> events;
  WorldState final_world;
  std::vector<Turn> turns;
  RunStatus status = RunStatus::Completed;
  std::map<std::string, bool> choices;  // choice-point assignment, exhaustive runs only
};

struct BlockedPlan {
  AgentId agent;
  std::string waiting_for;
};

/// Raised when no plan can step and no pending date can unblock one.
class DeadlockError : public Error {
 public:
  DeadlockError(std::vector<BlockedPlan> blocked, Progression partial);
  const std::vector<BlockedPlan>& blocked() const noexcept { return blocked_; }
  const Progression& partial() const noexcept { return partial_; }

 private:
  std::vector<BlockedPlan> blocked_;
  Progression partial_;
};

/// Raised when the remaining steps need the clock past the horizon.
class HorizonError : public Error {
 public:
  HorizonError(Date needed, Date horizon, Progression partial);
  const Progression& partial() const noexcept { return partial_; }

 private:
  Progression partial_;
};

inline constexpr Date kNoHorizon{std::numeric_limits<std::int64_t>::max()};

/// Executes the plans on top of `world` until every plan stops.
///
/// WaitFor steps block until their trigger holds; a blocked plan is skipped.
/// When nothing can step the clock jumps to the earliest pending date. Under
/// RoundRobin each cycle offers every plan exactly one turn in agent order.
/// Exhaustive returns the first progression in canonical order.
Progression run(const WorldState& world, const std::vector<Plan>& plans, const ScheduleStrategy& strategy,
                Date horizon = kNoHorizon);

/// All maximal progressions over every interleaving and every assignment of
/// the world's choice points, deduplicated and canonically ordered.
/// Throws BoundExceeded when the plans hold more than `bound` actions.
std::vector<Progression> enumerate_interleavings(const WorldState& world, const std::vector<Plan>& plans,
                                                 std::size_t bound, Date horizon = kNoHorizon);

/// Applies `actions` in order at the current date, then settles every open
/// credit-sale contract by paying it on its due date (earliest first).
Progression run_sequence(const WorldState& world, const std::vector<Action>& actions);

/// Between two consecutive turns of any plan in adjacent cycles, every other
/// plan takes at most one turn.
bool round_robin_fair(const Progression& progression);

/// Canonical text key of an event list; equal keys mean equal traces.
std::string trace_key(const std::vector<Event>& events);

std::string_view to_string(RunStatus s);

}  // namespace rpsf
