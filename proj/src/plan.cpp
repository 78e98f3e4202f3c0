#include "rpsf/plan.hpp"

namespace rpsf {

namespace {

void emit(const std::vector<PlanStep>& steps, std::vector<Instr>& out) {
  for (const auto& s : steps) {
    if (const auto* d = std::get_if<step::Do>(&s.value)) {
      out.emplace_back(instr::Do{d->action});
    } else if (const auto* w = std::get_if<step::WaitFor>(&s.value)) {
      out.emplace_back(instr::Wait{w->trigger});
    } else if (const auto* b = std::get_if<step::Branch>(&s.value)) {
      const std::size_t jump_unless = out.size();
      out.emplace_back(instr::JumpUnless{b->condition, 0});
      emit(b->then_steps, out);
      const std::size_t jump_end = out.size();
      out.emplace_back(instr::Jump{0});
      std::get<instr::JumpUnless>(out[jump_unless]).target = out.size();
      emit(b->else_steps, out);
      std::get<instr::Jump>(out[jump_end]).target = out.size();
    } else {
      out.emplace_back(instr::Halt{});
    }
  }
}

std::size_t count(const std::vector<PlanStep>& steps) {
  std::size_t n = 0;
  for (const auto& s : steps) {
    if (std::holds_alternative<step::Do>(s.value)) {
      ++n;
    } else if (const auto* b = std::get_if<step::Branch>(&s.value)) {
      n += count(b->then_steps) + count(b->else_steps);
    }
  }
  return n;
}

}  // namespace

std::vector<Instr> compile(const Plan& plan) {
  std::vector<Instr> out;
  emit(plan.steps, out);
  return out;
}

std::size_t count_actions(const Plan& plan) { return count(plan.steps); }

PlanCursor make_cursor(const Plan& plan) {
  return PlanCursor{plan.agent, std::make_shared<const std::vector<Instr>>(compile(plan)), 0};
}

}  // namespace rpsf
