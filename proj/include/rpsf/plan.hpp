#pragma once

#include "rpsf/action.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace rpsf {

struct PlanStep;

namespace step {
struct Do {
  Action action;
};
struct WaitFor {
  Trigger trigger;
};
struct Branch {
  Condition condition;
  std::vector<PlanStep> then_steps;
  std::vector<PlanStep> else_steps;
};
struct Stop {};
}  // namespace step

struct PlanStep {
  std::variant<step::Do, step::WaitFor, step::Branch, step::Stop> value;
};

/// Future behaviour of one agent, consumed strictly in order.
struct Plan {
  AgentId agent;
  std::vector<PlanStep> steps;
};

// Plans compile to a flat instruction sequence with forward jumps only, so a
// plan position is a single index.
namespace instr {
struct Do {
  Action action;
};
struct Wait {
  Trigger trigger;
};
struct JumpUnless {
  Condition condition;
  std::size_t target = 0;
};
struct Jump {
  std::size_t target = 0;
};
struct Halt {};
}  // namespace instr

using Instr = std::variant<instr::Do, instr::Wait, instr::JumpUnless, instr::Jump, instr::Halt>;

std::vector<Instr> compile(const Plan& plan);

/// Number of Do steps across all branches.
std::size_t count_actions(const Plan& plan);

/// A compiled plan and its position.
struct PlanCursor {
  AgentId agent;
  std::shared_ptr<const std::vector<Instr>> code;
  std::size_t pc = 0;

  bool at_end() const { return !code || pc >= code->size(); }
};

PlanCursor make_cursor(const Plan& plan);

// Builders used by the scenario catalogue and tests.
inline PlanStep do_(Action a) { return PlanStep{step::Do{std::move(a)}}; }
inline PlanStep wait_for(Trigger t) { return PlanStep{step::WaitFor{std::move(t)}}; }
inline PlanStep branch(Condition c, std::vector<PlanStep> then_steps, std::vector<PlanStep> else_steps = {}) {
  return PlanStep{step::Branch{std::move(c), std::move(then_steps), std::move(else_steps)}};
}
inline PlanStep stop() { return PlanStep{step::Stop{}}; }

}  // namespace rpsf
