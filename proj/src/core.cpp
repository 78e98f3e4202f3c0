#include "rpsf/core.hpp"

#include <array>
#include <utility>

namespace rpsf {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<Role, std::string_view>, 4> kRoles{{
    {Role::Person, "person"},
    {Role::Bank, "bank"},
    {Role::Broker, "broker"},
    {Role::Company, "company"},
}};

constexpr std::array<std::pair<ActionKind, std::string_view>, 18> kKinds{{
    {ActionKind::PromisePay, "PromisePay"},
    {ActionKind::PromiseAcceptPayment, "PromiseAcceptPayment"},
    {ActionKind::Pay, "Pay"},
    {ActionKind::ReceivePayment, "ReceivePayment"},
    {ActionKind::AcknowledgeReceipt, "AcknowledgeReceipt"},
    {ActionKind::PromiseBuyOnCondition, "PromiseBuyOnCondition"},
    {ActionKind::BuyOnCredit, "BuyOnCredit"},
    {ActionKind::AssertExpectation, "AssertExpectation"},
    {ActionKind::JustifyEntitlement, "JustifyEntitlement"},
    {ActionKind::PromiseInsurancePayout, "PromiseInsurancePayout"},
    {ActionKind::PromiseManageFunds, "PromiseManageFunds"},
    {ActionKind::ExchangeDenominations, "ExchangeDenominations"},
    {ActionKind::SpotSale, "SpotSale"},
    {ActionKind::Inform, "Inform"},
    {ActionKind::SignContract, "SignContract"},
    {ActionKind::PrepareContract, "PrepareContract"},
    {ActionKind::PrepareGood, "PrepareGood"},
    {ActionKind::RequestPrepareGood, "RequestPrepareGood"},
}};

constexpr std::array<std::pair<EthicalTag, std::string_view>, 3> kTags{{
    {EthicalTag::ContingentOnChance, "ContingentOnChance"},
    {EthicalTag::UndisclosedInformation, "UndisclosedInformation"},
    {EthicalTag::Coercion, "Coercion"},
}};

constexpr std::array<std::pair<Stage, std::string_view>, 7> kStages{{
    {Stage::Drafted, "Drafted"},
    {Stage::Prepared, "Prepared"},
    {Stage::PartiallySigned, "PartiallySigned"},
    {Stage::Active, "Active"},
    {Stage::PartiallyHonoured, "PartiallyHonoured"},
    {Stage::Honoured, "Honoured"},
    {Stage::Breached, "Breached"},
}};

constexpr std::array<std::pair<SigningMode, std::string_view>, 2> kModes{{
    {SigningMode::InitiatorOnly, "initiator-only"},
    {SigningMode::BothParties, "both-parties"},
}};

constexpr std::array<std::pair<Verdict, std::string_view>, 3> kVerdicts{{
    {Verdict::Halal, "Halal"},
    {Verdict::Haram, "Haram"},
    {Verdict::Undecided, "Undecided"},
}};

constexpr std::array<std::pair<ErrorCode, std::string_view>, 14> kErrors{{
    {ErrorCode::InsufficientFunds, "InsufficientFunds"},
    {ErrorCode::NotOwner, "NotOwner"},
    {ErrorCode::StageViolation, "StageViolation"},
    {ErrorCode::UnknownReference, "UnknownReference"},
    {ErrorCode::InvalidAction, "InvalidAction"},
    {ErrorCode::NotAPromise, "NotAPromise"},
    {ErrorCode::DeadlockDetected, "DeadlockDetected"},
    {ErrorCode::HorizonExceeded, "HorizonExceeded"},
    {ErrorCode::BoundExceeded, "BoundExceeded"},
    {ErrorCode::UnknownScenario, "UnknownScenario"},
    {ErrorCode::ParameterViolation, "ParameterViolation"},
    {ErrorCode::NonpositivePrincipal, "NonpositivePrincipal"},
    {ErrorCode::ZeroDuration, "ZeroDuration"},
    {ErrorCode::Precondition, "Precondition"},
}};

}  // namespace

int stage_rank(Stage s) {
  switch (s) {
    case Stage::Drafted: return 0;
    case Stage::Prepared: return 1;
    case Stage::PartiallySigned: return 2;
    case Stage::Active: return 3;
    case Stage::PartiallyHonoured: return 4;
    case Stage::Honoured:
    case Stage::Breached: return 5;
  }
  return 0;
}

bool stage_transition_allowed(Stage from, Stage to) {
  if (from == to) return true;
  return stage_rank(to) > stage_rank(from);
}

bool is_promise(ActionKind kind) {
  switch (kind) {
    case ActionKind::PromisePay:
    case ActionKind::PromiseAcceptPayment:
    case ActionKind::PromiseBuyOnCondition:
    case ActionKind::PromiseInsurancePayout:
    case ActionKind::PromiseManageFunds:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(Role r) { return name_of(kRoles, r); }
std::string_view to_string(ActionKind k) { return name_of(kKinds, k); }
std::string_view to_string(EthicalTag t) { return name_of(kTags, t); }
std::string_view to_string(Stage s) { return name_of(kStages, s); }
std::string_view to_string(SigningMode m) { return name_of(kModes, m); }
std::string_view to_string(Verdict v) { return name_of(kVerdicts, v); }
std::string_view to_string(ErrorCode c) { return name_of(kErrors, c); }

std::optional<Role> role_from_string(std::string_view s) { return lookup(kRoles, s); }
std::optional<ActionKind> action_kind_from_string(std::string_view s) { return lookup(kKinds, s); }
std::optional<EthicalTag> ethical_tag_from_string(std::string_view s) { return lookup(kTags, s); }
std::optional<Stage> stage_from_string(std::string_view s) { return lookup(kStages, s); }
std::optional<SigningMode> signing_mode_from_string(std::string_view s) { return lookup(kModes, s); }
std::optional<Verdict> verdict_from_string(std::string_view s) { return lookup(kVerdicts, s); }

}  // namespace rpsf
