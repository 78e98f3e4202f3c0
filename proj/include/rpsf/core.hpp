#pragma once

#include "rpsf/quantity.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rpsf {

using AgentId = std::string;
using GoodId = std::string;
using ContractId = std::string;
using SeqNo = std::uint64_t;

/// Non-negative count of days.
struct Duration {
  std::int64_t days = 0;
  friend auto operator<=>(const Duration&, const Duration&) = default;
};

/// Discrete day index on the engine clock.
struct Date {
  std::int64_t day = 0;
  friend auto operator<=>(const Date&, const Date&) = default;
};

inline Date operator+(Date d, Duration t) { return Date{d.day + t.days}; }
inline Duration operator-(Date a, Date b) { return Duration{a.day - b.day}; }

enum class Role { Person, Bank, Broker, Company };

enum class ActionKind {
  PromisePay,
  PromiseAcceptPayment,
  Pay,
  ReceivePayment,
  AcknowledgeReceipt,
  PromiseBuyOnCondition,
  BuyOnCredit,
  AssertExpectation,
  JustifyEntitlement,
  PromiseInsurancePayout,
  PromiseManageFunds,
  ExchangeDenominations,
  // composite kinds
  SpotSale,
  Inform,
  SignContract,
  PrepareContract,
  PrepareGood,
  RequestPrepareGood,
};

enum class EthicalTag { ContingentOnChance, UndisclosedInformation, Coercion };

/// Contract life-cycle stage. Transitions only move forward:
/// Drafted -> Prepared -> PartiallySigned -> Active -> PartiallyHonoured -> {Honoured, Breached}.
enum class Stage { Drafted, Prepared, PartiallySigned, Active, PartiallyHonoured, Honoured, Breached };

enum class SigningMode { InitiatorOnly, BothParties };

enum class Verdict { Halal, Haram, Undecided };

int stage_rank(Stage s);
bool stage_transition_allowed(Stage from, Stage to);
bool is_promise(ActionKind kind);

std::string_view to_string(Role r);
std::string_view to_string(ActionKind k);
std::string_view to_string(EthicalTag t);
std::string_view to_string(Stage s);
std::string_view to_string(SigningMode m);
std::string_view to_string(Verdict v);

std::optional<Role> role_from_string(std::string_view s);
std::optional<ActionKind> action_kind_from_string(std::string_view s);
std::optional<EthicalTag> ethical_tag_from_string(std::string_view s);
std::optional<Stage> stage_from_string(std::string_view s);
std::optional<SigningMode> signing_mode_from_string(std::string_view s);
std::optional<Verdict> verdict_from_string(std::string_view s);

struct Agent {
  AgentId name;
  Role role = Role::Person;
};

/// A non-monetary good. Its market value, when known, is a whole number of blocks.
struct Good {
  GoodId id;
  std::string kind;
  AgentId owner;
  std::optional<Quantity> market_value;
  Quantity block_size{1};
  bool is_money = false;
};

enum class ErrorCode {
  InsufficientFunds,
  NotOwner,
  StageViolation,
  UnknownReference,
  InvalidAction,
  NotAPromise,
  DeadlockDetected,
  HorizonExceeded,
  BoundExceeded,
  UnknownScenario,
  ParameterViolation,
  NonpositivePrincipal,
  ZeroDuration,
  Precondition,
};

std::string_view to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rpsf
