#pragma once

#include "rpsf/engine.hpp"
#include "rpsf/scenarios.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rpsf {

enum class PositionMode { Descriptive, Functional };

/// Built-in detectors a rule can refer to.
enum class Detector {
  Riba,
  InaAny,
  InaSingleContract,
  ContingentOnChance,
  UndisclosedInformation,
  Coercion,
  UnvaluedGoods,
  FunctionalLoan,
};

struct Rule {
  std::string name;
  Detector detector = Detector::Riba;
  Verdict verdict = Verdict::Haram;
};

struct LegalPosition {
  std::string name;
  PositionMode mode = PositionMode::Descriptive;
  std::vector<Rule> rules;  // first match wins
  Verdict default_verdict = Verdict::Halal;
};

struct Finding {
  std::string rule;
  std::vector<SeqNo> events;
  std::vector<ContractId> contracts;
  std::string detail;
};

struct Judgement {
  Verdict verdict = Verdict::Halal;
  std::vector<Finding> reasons;
};

struct RibaFinding {
  AgentId lender;
  AgentId borrower;
  Quantity principal;
  Quantity repayment;
  ContractId link;
  Duration duration;
  SeqNo out_seq = 0;
  SeqNo back_seq = 0;

  Quantity increment() const { return repayment - principal; }
};

struct InaFinding {
  GoodId good;
  AgentId seller;  // first sale
  AgentId buyer;
  bool single_contract = false;
  SeqNo first_seq = 0;
  SeqNo second_seq = 0;
};

/// An agent whose payments all precede its receipts, with a positive total
/// gain, while every good it traded ends where it started.
struct LoanProfileFinding {
  AgentId lender;
  Quantity paid;
  Quantity received;
  Date first;
  Date last;
};

const std::vector<LegalPosition>& builtin_positions();
const LegalPosition* find_position(std::string_view name);

/// Pairs of transfers linked by a contract declaring a positive interest
/// rate, going out and coming back between the same two agents with R > P.
std::vector<RibaFinding> detect_riba(const std::map<ContractId, ContractRecord>& contracts,
                                     const HistoryLog& history);

/// Goods sold A to B and then straight back from B to A.
std::vector<InaFinding> detect_ina(const HistoryLog& history);

std::vector<LoanProfileFinding> detect_loan_profile(const WorldState& initial, const Progression& progression);

Judgement judge(const LegalPosition& position, const WorldState& initial, const Progression& progression);
Judgement judge(const LegalPosition& position, const ScenarioInstance& instance, const Progression& progression);

/// ((R - P) / P) * (365 / t). Throws NonpositivePrincipal or ZeroDuration.
Quantity effective_interest_rate(const Quantity& principal, const Quantity& repayment, Duration t);

std::string_view to_string(PositionMode m);
std::string_view to_string(Detector d);
std::optional<PositionMode> position_mode_from_string(std::string_view s);
std::optional<Detector> detector_from_string(std::string_view s);

}  // namespace rpsf
