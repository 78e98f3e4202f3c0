#include "rpsf/scenarios.hpp"

#include <algorithm>
#include <functional>

namespace rpsf {

namespace {

[[noreturn]] void violation(const std::string& what) { throw Error(ErrorCode::ParameterViolation, what); }

// ---- action and contract builders ------------------------------------------

Reason cite(const ContractId& id, std::string label = {}) {
  Reason r;
  r.label = std::move(label);
  if (!id.empty()) r.contracts.push_back(id);
  return r;
}

Action make(ActionKind kind, AgentId actor, AgentId counterparty, Quantity sum = 0) {
  Action a;
  a.kind = kind;
  a.actor = std::move(actor);
  a.counterparty = std::move(counterparty);
  a.sum = std::move(sum);
  return a;
}

Action pay(AgentId from, AgentId to, Quantity sum, const ContractId& c = {}, std::string label = {}) {
  Action a = make(ActionKind::Pay, std::move(from), std::move(to), std::move(sum));
  a.reason = cite(c, std::move(label));
  return a;
}

Action pay_on(std::int64_t day, AgentId from, AgentId to, Quantity sum, const ContractId& c) {
  Action a = pay(std::move(from), std::move(to), std::move(sum), c);
  a.date = Date{day};
  a.contract = c;
  return a;
}

Action spot(AgentId buyer, AgentId seller, GoodId good, Quantity price, const ContractId& c = {}) {
  Action a = make(ActionKind::SpotSale, std::move(buyer), std::move(seller), std::move(price));
  a.good = std::move(good);
  a.reason = cite(c);
  return a;
}

Action credit(AgentId buyer, AgentId seller, GoodId good, Quantity price, std::int64_t due, ContractId id,
              const ContractId& c = {}, std::optional<Quantity> upfront = std::nullopt) {
  Action a = make(ActionKind::BuyOnCredit, std::move(buyer), std::move(seller), std::move(price));
  a.good = std::move(good);
  a.due = Date{due};
  a.contract = std::move(id);
  a.upfront = std::move(upfront);
  a.reason = cite(c);
  return a;
}

Action inform(AgentId from, AgentId to, std::string label, const ContractId& c = {}) {
  Action a = make(ActionKind::Inform, std::move(from), std::move(to));
  a.reason = cite(c, std::move(label));
  return a;
}

Action ack(AgentId who, AgentId from, Quantity sum, const ContractId& c = {}) {
  Action a = make(ActionKind::AcknowledgeReceipt, std::move(who), std::move(from), std::move(sum));
  a.reason = cite(c);
  return a;
}

Action prepare(AgentId actor, const ContractRecord& draft) {
  Action a = make(ActionKind::PrepareContract, std::move(actor), {});
  a.contract = draft.id;
  a.draft = std::make_shared<const ContractRecord>(draft);
  return a;
}

Action sign(AgentId actor, const ContractId& id) {
  Action a = make(ActionKind::SignContract, std::move(actor), {});
  a.contract = id;
  return a;
}

Action sign_draft(AgentId actor, const ContractRecord& draft) {
  Action a = sign(std::move(actor), draft.id);
  a.draft = std::make_shared<const ContractRecord>(draft);
  return a;
}

Action request_good(AgentId from, AgentId to, GoodId good, Quantity price, const ContractId& c = {}) {
  Action a = make(ActionKind::RequestPrepareGood, std::move(from), std::move(to), std::move(price));
  a.good = std::move(good);
  a.reason = cite(c);
  return a;
}

Action prepare_good(AgentId actor, Good spec) {
  Action a = make(ActionKind::PrepareGood, std::move(actor), {});
  a.good = spec.id;
  a.good_spec = std::move(spec);
  return a;
}

Trigger after(ActionKind kind, std::optional<AgentId> actor = std::nullopt,
              std::optional<AgentId> counterparty = std::nullopt, std::optional<GoodId> good = std::nullopt,
              std::optional<ContractId> contract = std::nullopt) {
  return trig::AfterEvent{EventPattern{kind, std::move(actor), std::move(counterparty), std::move(good),
                                       std::move(contract), std::nullopt}};
}

Trigger when(Condition c) { return trig::ConditionMet{std::move(c)}; }
Trigger active(const ContractId& id) { return when(cond::StageAtLeast{id, Stage::Active}); }
Trigger signed_by(const ContractId& id, const AgentId& who) { return when(cond::SignedBy{id, who}); }

Clause clause(AgentId obliged, Action action, Trigger trigger = trig::Always{},
              std::optional<std::int64_t> deadline = std::nullopt) {
  Clause c;
  c.obliged = std::move(obliged);
  c.action = std::move(action);
  c.trigger = std::move(trigger);
  if (deadline) c.deadline = Date{*deadline};
  return c;
}

ContractRecord agreement(ContractId id, std::string kind, std::set<AgentId> parties, AgentId initiator,
                         std::vector<Clause> clauses, std::set<ContractId> refs = {}) {
  ContractRecord c;
  c.id = std::move(id);
  c.kind = std::move(kind);
  c.parties = std::move(parties);
  c.initiator = std::move(initiator);
  c.clauses = std::move(clauses);
  c.references = std::move(refs);
  return c;
}

std::map<std::string, Verdict> expect(Verdict descriptive, Verdict functional, bool ina = false,
                                      bool ina_single = false) {
  const auto worse = [](Verdict v, bool haram) { return haram ? Verdict::Haram : v; };
  return {
      {"CONVENTIONAL", Verdict::Halal},
      {"STRICT_DESCRIPTIVE", descriptive},
      {"STRICT_FUNCTIONAL", functional},
      {"MAJORITY", worse(descriptive, ina)},
      {"MALAYSIA", worse(descriptive, ina && ina_single)},
  };
}

Verdict haram_if(bool b) { return b ? Verdict::Haram : Verdict::Halal; }

// ---- parameters --------------------------------------------------------------

ParamSpec money(std::string name, Quantity def, std::string help) {
  return ParamSpec{std::move(name), ParamKind::Money, std::move(def), std::move(help)};
}
ParamSpec derived_money(std::string name, std::string help) {
  return ParamSpec{std::move(name), ParamKind::Money, std::nullopt, std::move(help)};
}
ParamSpec rate(std::string name, Quantity def, std::string help) {
  return ParamSpec{std::move(name), ParamKind::Rate, std::move(def), std::move(help)};
}
ParamSpec days(std::string name, std::int64_t def, std::string help) {
  return ParamSpec{std::move(name), ParamKind::Days, Quantity(def), std::move(help)};
}
ParamSpec flag(std::string name, bool def, std::string help) {
  return ParamSpec{std::move(name), ParamKind::Flag, Quantity(def ? 1 : 0), std::move(help)};
}
ParamSpec choice(std::string name, std::int64_t def, std::string help) {
  return ParamSpec{std::move(name), ParamKind::Choice, Quantity(def), std::move(help)};
}
ParamSpec endowment() { return money("endowment", 0, "extra cash given to every agent"); }

std::int64_t as_int(const Quantity& q) { return static_cast<std::int64_t>(q.numerator()); }

Params resolve(const ScenarioSpec& spec, const Params& overrides) {
  Params out;
  for (const auto& [k, v] : overrides) {
    auto it = std::find_if(spec.params.begin(), spec.params.end(), [&](const ParamSpec& p) { return p.name == k; });
    if (it == spec.params.end()) violation("scenario " + spec.name + " has no parameter '" + k + "'");
  }
  for (const auto& p : spec.params) {
    auto it = overrides.find(p.name);
    if (it == overrides.end()) {
      if (p.default_value) out[p.name] = *p.default_value;
      continue;
    }
    const Quantity& v = it->second;
    switch (p.kind) {
      case ParamKind::Money:
      case ParamKind::Rate:
        if (v.sign() < 0) violation(p.name + " must be non-negative, got " + v.to_string());
        break;
      case ParamKind::Days:
        if (!v.is_integer() || v.sign() <= 0) violation(p.name + " must be a positive whole number of days");
        if (v > Quantity(std::int64_t{1} << 40)) violation(p.name + " is too large");
        break;
      case ParamKind::Flag:
        if (v != 0 && v != 1) violation(p.name + " must be 0 or 1");
        break;
      case ParamKind::Choice:
        if (!v.is_integer() || v.sign() < 0 || v > 64) violation(p.name + " must be a small non-negative integer");
        break;
    }
    out[p.name] = v;
  }
  return out;
}

struct Ctx {
  const Params& p;
  std::string sfx;  // appended to agent, good and contract ids when scenarios are combined

  const Quantity& operator[](const std::string& k) const { return p.at(k); }
  std::string id(const std::string& base) const { return base + sfx; }
};

void give(WorldState& w, const std::string& agent, Role role, const Quantity& cash, const Ctx& ctx) {
  add_agent(w, agent, role, cash + ctx["endowment"]);
}

// ---- the catalogue -------------------------------------------------------------

void loan_with_interest(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity &p = ctx["p"], &i = ctx["i"], &c = ctx["c"], &c2 = ctx["c_prime"];
  const std::int64_t t = as_int(ctx["t"]);
  if (p.sign() <= 0) violation("p must be positive");
  if (c > p) violation("transaction cost c exceeds the principal p");
  const AgentId X = ctx.id("X"), Y = ctx.id("Y");
  const ContractId L = ctx.id("L");

  give(s.initial, X, Role::Person, p - c, ctx);
  give(s.initial, Y, Role::Person, i + c + c2, ctx);

  ContractRecord loan = agreement(L, "loan", {X, Y}, Y,
                                  {clause(X, pay(X, Y, p - c), trig::Always{}, 0),
                                   clause(Y, pay(Y, X, p + i + c2), after(ActionKind::Pay, X, Y, {}, L), t)});
  loan.interest = InterestTerms{total_div(i, p), c};

  s.plans.push_back(Plan{Y,
                         {do_(prepare(Y, loan)), do_(sign(Y, L)), wait_for(after(ActionKind::Pay, X, Y, {}, L)),
                          do_(ack(Y, X, p - c, L)), do_(pay_on(t, Y, X, p + i + c2, L))}});
  s.plans.push_back(Plan{X,
                         {wait_for(signed_by(L, Y)), do_(sign(X, L)), do_(pay(X, Y, p - c, L)),
                          wait_for(after(ActionKind::Pay, Y, X, {}, L)), do_(ack(X, Y, p + i + c2, L))}});
  s.principals = {X, Y};
  s.lender = X;
  s.principal = p;
  s.term = Duration{t};
  s.horizon = Date{t};
  s.expected = expect(haram_if(i.sign() > 0), haram_if((i + c + c2).sign() > 0));
}

void savings_account(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity &p = ctx["p"], &c = ctx["c"], &q = ctx["q"];
  const std::int64_t t = as_int(ctx["t"]);
  if (p.sign() <= 0) violation("p must be positive");
  const Quantity repayment = p - c + q * p;
  if (repayment.sign() < 0) violation("repayment p - c + q*p is negative");
  const AgentId X = ctx.id("X"), Y = ctx.id("Y"), Z = ctx.id("Z");
  const ContractId S = ctx.id("S");

  give(s.initial, X, Role::Person, p, ctx);
  give(s.initial, Y, Role::Bank, repayment > p ? repayment - p : Quantity{}, ctx);
  give(s.initial, Z, Role::Broker, 0, ctx);

  ContractRecord account =
      agreement(S, "savings-account", {X, Y}, X,
                {clause(X, pay(X, Y, p), trig::Always{}, 0),
                 clause(Y, pay(Y, X, repayment), after(ActionKind::Pay, X, Y, {}, S), t)});
  account.interest = InterestTerms{q, c};

  s.plans.push_back(Plan{X,
                         {wait_for(after(ActionKind::Inform, Z, X, {}, S)), do_(sign(X, S)), wait_for(active(S)),
                          do_(pay(X, Y, p, S)), wait_for(after(ActionKind::Pay, Y, X, {}, S)),
                          do_(ack(X, Y, repayment, S))}});
  s.plans.push_back(Plan{Y,
                         {wait_for(signed_by(S, X)), do_(sign(Y, S)), wait_for(after(ActionKind::Pay, X, Y, {}, S)),
                          do_(ack(Y, X, p, S)), do_(pay_on(t, Y, X, repayment, S))}});
  s.plans.push_back(Plan{Z,
                         {do_(prepare(Z, account)), do_(inform(Z, X, "model contract", S)), wait_for(active(S)),
                          do_(inform(Z, Y, "payment instructions", S)), do_(inform(Z, X, "repayment date", S))}});
  s.principals = {X, Y};
  s.lender = X;
  s.principal = p;
  s.term = Duration{t};
  s.horizon = Date{t};
  s.expected = expect(haram_if(q.sign() > 0 && repayment > p), haram_if(repayment > p));
}

void ina_two_party(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity &p = ctx["p"], &i = ctx["i"];
  const std::int64_t t = as_int(ctx["t"]);
  const bool single = ctx["single_contract"] == 1;
  if (p.sign() <= 0) violation("p must be positive");
  const AgentId X = ctx.id("X"), Y = ctx.id("Y");
  const GoodId G = ctx.id("S");
  const ContractId spot_c = ctx.id(single ? "INA" : "INA-SPOT");
  const ContractId credit_c = ctx.id(single ? "INA" : "INA-CREDIT");
  const ContractId payment = ctx.id("INA-PAYMENT");

  give(s.initial, X, Role::Bank, p, ctx);
  give(s.initial, Y, Role::Person, i, ctx);
  add_good(s.initial, Good{G, "asset", Y, p, p, false});

  Clause first = clause(X, spot(X, Y, G, p));
  Clause second =
      clause(Y, credit(Y, X, G, p + i, t, {}), after(ActionKind::SpotSale, X, Y, G));
  std::vector<PlanStep> setup;
  if (single) {
    const ContractRecord c = agreement(spot_c, "sale-repurchase", {X, Y}, Y, {first, second});
    setup = {do_(prepare(Y, c)), do_(sign(Y, spot_c))};
  } else {
    const ContractRecord a = agreement(spot_c, "spot-sale", {X, Y}, Y, {first});
    const ContractRecord b = agreement(credit_c, "credit-sale", {X, Y}, Y, {second}, {spot_c});
    setup = {do_(prepare(Y, a)), do_(prepare(Y, b)), do_(sign(Y, spot_c)), do_(sign(Y, credit_c))};
  }
  std::vector<PlanStep> ysteps = setup;
  ysteps.push_back(wait_for(when(cond::Owns{X, G})));
  ysteps.push_back(do_(credit(Y, X, G, p + i, t, payment, credit_c)));
  ysteps.push_back(do_(pay_on(t, Y, X, p + i, payment)));
  s.plans.push_back(Plan{Y, ysteps});

  std::vector<PlanStep> xsteps = {wait_for(signed_by(credit_c, Y))};
  if (!single) xsteps.push_back(do_(sign(X, spot_c)));
  xsteps.push_back(do_(sign(X, credit_c)));
  xsteps.push_back(do_(spot(X, Y, G, p, spot_c)));
  xsteps.push_back(wait_for(after(ActionKind::Pay, Y, X, {}, payment)));
  xsteps.push_back(do_(ack(X, Y, p + i, payment)));
  s.plans.push_back(Plan{X, xsteps});

  s.principals = {X, Y};
  s.lender = X;
  s.principal = p;
  s.term = Duration{t};
  s.horizon = Date{t};
  s.expected = expect(Verdict::Halal, haram_if(i.sign() > 0), true, single);
}

void tawarruq_classic(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity &p = ctx["p"], &i = ctx["i"];
  const std::int64_t t = as_int(ctx["t"]);
  if (p.sign() <= 0) violation("p must be positive");
  const AgentId X = ctx.id("X"), Y = ctx.id("Y"), Z = ctx.id("Z");
  const GoodId S = ctx.id("S");
  const ContractId K = ctx.id("K");

  give(s.initial, X, Role::Bank, p, ctx);
  give(s.initial, Y, Role::Person, i, ctx);
  give(s.initial, Z, Role::Company, 0, ctx);
  add_good(s.initial, Good{S, "asset", Z, p, p, false});

  s.plans.push_back(Plan{X,
                         {do_(inform(X, Z, "order " + S)), do_(spot(X, Z, S, p)),
                          do_(inform(X, Y, "offer " + S + " on credit")), wait_for(after(ActionKind::Pay, Y, X, {}, K)),
                          do_(ack(X, Y, p + i, K))}});
  s.plans.push_back(Plan{Y,
                         {wait_for(after(ActionKind::Inform, X, Y)), do_(credit(Y, X, S, p + i, t, K)),
                          do_(inform(Y, Z, "offer " + S)), wait_for(after(ActionKind::SpotSale, Z, Y, S)),
                          do_(ack(Y, Z, p)), do_(pay_on(t, Y, X, p + i, K))}});
  s.plans.push_back(Plan{Z,
                         {wait_for(after(ActionKind::SpotSale, X, Z, S)), do_(ack(Z, X, p)),
                          wait_for(after(ActionKind::Inform, Y, Z)), do_(spot(Z, Y, S, p))}});
  s.principals = {X, Y};
  s.lender = X;
  s.principal = p;
  s.term = Duration{t};
  s.horizon = Date{t};
  s.expected = expect(Verdict::Halal, haram_if(i.sign() > 0));
}

void contractus_trinus(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity &p = ctx["p"], &profit = ctx["profit"], &premium = ctx["premium"];
  const std::int64_t t = as_int(ctx["t"]);
  if (p.sign() <= 0) violation("p must be positive");
  const AgentId A = ctx.id("A"), B = ctx.id("B");
  const ContractId P = ctx.id("PARTNERSHIP"), F = ctx.id("PROFIT-SALE"), I = ctx.id("INSURANCE");

  give(s.initial, A, Role::Person, p + premium, ctx);
  give(s.initial, B, Role::Company, profit, ctx);

  const ContractRecord partnership = agreement(
      P, "partnership", {A, B}, A, {clause(A, pay(A, B, p), trig::Always{}, 0), clause(B, pay(B, A, p), trig::Always{}, t)});
  const ContractRecord profit_sale =
      agreement(F, "sale-of-profit", {A, B}, A, {clause(B, pay(B, A, profit), trig::Always{}, t)}, {P});
  // The cover pays out only on a claim, which a sound venture never files.
  const ContractRecord insurance = agreement(
      I, "insurance", {A, B}, A,
      {clause(A, pay(A, B, premium), trig::Always{}, 0),
       clause(B, pay(B, A, p), after(ActionKind::AssertExpectation, A, B, {}, I), t)},
      {P});

  s.plans.push_back(Plan{A,
                         {do_(prepare(A, partnership)), do_(prepare(A, profit_sale)), do_(prepare(A, insurance)),
                          do_(sign(A, P)), do_(sign(A, F)), do_(sign(A, I)), wait_for(active(I)),
                          do_(pay(A, B, p, P)), do_(pay(A, B, premium, I)),
                          wait_for(after(ActionKind::Pay, B, A, {}, P)), do_(ack(A, B, p + profit, P))}});
  s.plans.push_back(Plan{B,
                         {wait_for(signed_by(I, A)), do_(sign(B, P)), do_(sign(B, F)), do_(sign(B, I)),
                          do_(pay_on(t, B, A, profit, F)), do_(pay_on(t, B, A, p, P))}});
  s.principals = {A, B};
  s.lender = A;
  s.principal = p;
  s.term = Duration{t};
  s.horizon = Date{t};
  s.expected = expect(Verdict::Halal, haram_if(profit > premium));
}

void murabaha(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity &p = ctx["p"], &i = ctx["i"], &c = ctx["c"];
  const std::int64_t t = as_int(ctx["t"]);
  if (p.sign() <= 0) violation("p must be positive");
  const AgentId A = ctx.id("A"), Bank = ctx.id("BANK"), B = ctx.id("B");
  const GoodId G = ctx.id("G");
  const ContractId M = ctx.id("M1"), MP = ctx.id("M1.payment");

  give(s.initial, A, Role::Person, c + p + i, ctx);
  give(s.initial, Bank, Role::Bank, p, ctx);
  give(s.initial, B, Role::Company, 0, ctx);
  add_good(s.initial, Good{G, "merchandise", B, p, p, false});

  Action promise = make(ActionKind::PromiseBuyOnCondition, A, Bank, p + i);
  promise.good = G;
  promise.upfront = Quantity{};
  promise.due = Date{t};
  promise.condition = after(ActionKind::SpotSale, Bank, B, G);
  promise.contract = M;
  promise.signing = SigningMode::BothParties;

  s.plans.push_back(Plan{A,
                         {do_(promise), do_(pay(A, Bank, c, M, "mediation fee")),
                          wait_for(after(ActionKind::SpotSale, Bank, B, G)),
                          do_(credit(A, Bank, G, p + i, t, MP, M)), do_(pay_on(t, A, Bank, p + i, MP))}});
  s.plans.push_back(Plan{Bank, {wait_for(active(M)), do_(spot(Bank, B, G, p, M))}});
  s.principals = {A, Bank};
  s.lender = Bank;
  s.principal = p;
  s.term = Duration{t};
  s.horizon = Date{t};
  s.expected = expect(Verdict::Halal, Verdict::Halal);
}

enum class Pi { Plain, Prime, DoublePrime, TriplePrime, Single };

void tawarruq_pi(ScenarioInstance& s, const Ctx& ctx, Pi v) {
  const Quantity &p = ctx["p"], &c = ctx["c"], &q = ctx["q"], &block = ctx["block"];
  const std::int64_t t = as_int(ctx["t"]);
  if (p.sign() <= 0) violation("p must be positive");
  if (block.sign() <= 0) violation("block must be positive");
  Quantity price = p;
  if (v == Pi::Plain) {
    if (!(p / block).is_integer()) {
      violation("p = " + p.to_string() + " is not a whole number of blocks of " + block.to_string());
    }
  } else {
    auto it = ctx.p.find("p_prime");
    price = it == ctx.p.end() ? smallest_block_multiple(p, block) : it->second;
    if (price < p) violation("p_prime = " + price.to_string() + " is below p = " + p.to_string());
    if (!(price / block).is_integer()) {
      violation("p_prime = " + price.to_string() + " is not a whole number of blocks of " + block.to_string());
    }
  }
  const Quantity i = q * p;
  const Quantity deferred = p - c + i;
  const Quantity upfront = price - p;
  const Quantity credit_price = price - c + i;
  const Quantity resale = price - c / 2;
  if (deferred.sign() <= 0) violation("deferred payment p - c + q*p must be positive");
  if (resale.sign() < 0) violation("resale price is negative");

  const AgentId X = ctx.id("X"), Y = ctx.id("Y"), Z = ctx.id("Z");
  const GoodId G = ctx.id("G");
  const Quantity y_cash = upfront + (deferred > resale ? deferred - resale : Quantity{});
  give(s.initial, X, Role::Person, price, ctx);
  give(s.initial, Y, Role::Bank, y_cash, ctx);
  give(s.initial, Z, Role::Broker, 0, ctx);
  const Good spec{G, "commodity", Z, price, block, false};
  const std::optional<Quantity> up = v == Pi::Plain ? std::nullopt : std::optional<Quantity>(upfront);

  s.principals = {X, Y};
  s.lender = X;
  s.principal = p;
  s.term = Duration{t};
  s.horizon = Date{t};
  s.expected = expect(Verdict::Halal, haram_if(i > c));

  if (v == Pi::Plain || v == Pi::Prime) {
    const ContractId K = ctx.id("G.credit");
    s.plans.push_back(Plan{X,
                           {do_(request_good(X, Z, G, price)), wait_for(after(ActionKind::PrepareGood, Z, {}, G)),
                            do_(spot(X, Z, G, price))}});
    s.plans.push_back(Plan{Y,
                           {wait_for(when(cond::Owns{X, G})), do_(credit(Y, X, G, credit_price, t, K, {}, up)),
                            do_(pay_on(t, Y, X, deferred, K))}});
    s.plans.push_back(Plan{Z,
                           {wait_for(after(ActionKind::RequestPrepareGood, X, Z, G)), do_(prepare_good(Z, spec)),
                            wait_for(when(cond::Owns{Y, G})), do_(spot(Z, Y, G, resale))}});
    return;
  }

  const bool single = v == Pi::Single;
  const ContractId C1 = ctx.id(single ? "C" : "C1");
  const ContractId C2 = ctx.id(single ? "C" : "C2");
  const ContractId C3 = ctx.id(single ? "C" : "C3");
  const ContractId K = (single ? C1 : C2) + ".credit";

  Clause buy = clause(X, spot(X, Z, G, price), after(ActionKind::PrepareGood, Z, {}, G));
  Clause resell = clause(Y, credit(Y, X, G, credit_price, t, {}, {}, up), after(ActionKind::SpotSale, X, Z, G));
  Clause buy_back = clause(Z, spot(Z, Y, G, resale), after(ActionKind::BuyOnCredit, Y, X, G));

  // Steps 4 to 10 are the same in every contract packaging.
  std::vector<PlanStep> x_tail = {do_(request_good(X, Z, G, price, C1)),
                                  wait_for(after(ActionKind::Inform, Z, X, {}, C1)),
                                  do_(spot(X, Z, G, price, C1)), do_(inform(X, Y, "bought " + G, C2))};
  std::vector<PlanStep> y_tail = {wait_for(after(ActionKind::Inform, X, Y, {}, C2)),
                                  do_(credit(Y, X, G, credit_price, t, K, C2, up)),
                                  do_(inform(Y, Z, "bought " + G, C3)), do_(pay_on(t, Y, X, deferred, K))};
  std::vector<PlanStep> z_tail = {wait_for(after(ActionKind::RequestPrepareGood, X, Z, G)),
                                  do_(prepare_good(Z, spec)), do_(inform(Z, X, "prepared " + G, C1)),
                                  wait_for(after(ActionKind::Inform, Y, Z, {}, C3)),
                                  do_(spot(Z, Y, G, resale, C3))};
  std::vector<PlanStep> xs, ys, zs;

  if (single) {
    const ContractRecord all = agreement(C1, "tawarruq", {X, Y, Z}, X, {buy, resell, buy_back});
    xs = {do_(prepare(X, all)), do_(sign(X, C1)), wait_for(active(C1))};
    ys = {wait_for(signed_by(C1, X)), do_(sign(Y, C1))};
    zs = {wait_for(signed_by(C1, Y)), do_(sign(Z, C1))};
  } else {
    const ContractRecord c1 = agreement(C1, "sale", {X, Z}, Z, {buy});
    const ContractRecord c2 = agreement(C2, "credit-sale", {X, Y}, X, {resell}, {C1});
    const ContractRecord c3 = agreement(C3, "sale", {Y, Z}, Y, {buy_back}, {C2});
    if (v == Pi::DoublePrime) {
      zs = {do_(sign_draft(Z, c1)), wait_for(signed_by(C3, Y)), do_(sign(Z, C3))};
      xs = {wait_for(signed_by(C1, Z)), do_(sign(X, C1)), do_(sign_draft(X, c2)), wait_for(active(C3))};
      ys = {wait_for(signed_by(C2, X)), do_(sign(Y, C2)), do_(sign_draft(Y, c3))};
    } else {
      // Prepared in the order C1, C2, C3 and signed in the order C3, C2, C1.
      zs = {do_(prepare(Z, c1)), wait_for(signed_by(C3, Y)), do_(sign(Z, C3)), wait_for(active(C2)),
            do_(sign(Z, C1))};
      xs = {wait_for(when(cond::StageAtLeast{C1, Stage::Prepared})), do_(prepare(X, c2)), wait_for(active(C3)),
            do_(sign(X, C2)), wait_for(signed_by(C1, Z)), do_(sign(X, C1))};
      ys = {wait_for(when(cond::StageAtLeast{C2, Stage::Prepared})), do_(prepare(Y, c3)), do_(sign(Y, C3)),
            wait_for(signed_by(C2, X)), do_(sign(Y, C2))};
    }
  }
  xs.insert(xs.end(), x_tail.begin(), x_tail.end());
  ys.insert(ys.end(), y_tail.begin(), y_tail.end());
  zs.insert(zs.end(), z_tail.begin(), z_tail.end());
  s.plans.push_back(Plan{X, xs});
  s.plans.push_back(Plan{Y, ys});
  s.plans.push_back(Plan{Z, zs});
}

void brokered_loan(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity &p = ctx["p"], &i = ctx["i"];
  const std::int64_t t = as_int(ctx["t"]);
  const std::int64_t guarantee = as_int(ctx["guarantee"]);
  if (p.sign() <= 0) violation("p must be positive");
  if (guarantee > 2) violation("guarantee must be 0 (pledge_of_goods), 1 (goods_on_default) or 2 (income_share)");
  const AgentId X = ctx.id("X"), Y = ctx.id("Y"), Z = ctx.id("Z");
  const GoodId V = ctx.id("V");
  const ContractId C = ctx.id("C");
  const std::string willing = ctx.id("lender_willing");

  give(s.initial, X, Role::Person, i, ctx);
  give(s.initial, Y, Role::Person, p, ctx);
  give(s.initial, Z, Role::Broker, 0, ctx);
  s.initial.ground.flags[willing] = ctx["lender_willing"] == 1;
  s.initial.choice_points.push_back(willing);

  std::vector<Clause> clauses = {clause(Y, pay(Y, X, p), trig::Always{}, 0),
                                 clause(X, pay(X, Y, p + i), after(ActionKind::Pay, Y, X, {}, C), t)};
  const Trigger claim = after(ActionKind::AssertExpectation, Z, X, {}, C);
  std::vector<PlanStep> x_pledge, y_release;
  if (guarantee == 0) {
    add_good(s.initial, Good{V, "collateral", X, p * 2, p * 2, false});
    Action pledge = inform(X, Y, "pledge " + V, C);
    pledge.good = V;
    Action release = inform(Y, X, "release " + V, C);
    release.good = V;
    clauses.push_back(clause(X, pledge, trig::Always{}, 0));
    clauses.push_back(clause(Y, release, after(ActionKind::Pay, X, Y, {}, C), t));
    x_pledge = {do_(pledge)};
    y_release = {do_(release)};
  } else if (guarantee == 1) {
    add_good(s.initial, Good{V, "collateral", X, p * 2, p * 2, false});
    Action hand_over = inform(X, Y, "hand over " + V, C);
    hand_over.good = V;
    clauses.push_back(clause(X, hand_over, claim, t));
  } else {
    clauses.push_back(clause(X, pay(X, Y, 0), claim, t));
  }
  ContractRecord loan = agreement(C, "loan", {X, Y}, X, clauses);
  loan.interest = InterestTerms{total_div(i, p), 0};

  s.plans.push_back(Plan{Z,
                         {do_(prepare(Z, loan)), do_(inform(Z, X, "portfolio offer", C)),
                          wait_for(after(ActionKind::Inform, X, Z, {}, C)),
                          do_(inform(Z, Y, "signature request", C)), wait_for(after(ActionKind::Inform, Y, Z, {}, C)),
                          branch(cond::StageAtLeast{C, Stage::Active},
                                 {do_(inform(Z, X, "signed copy", C)), do_(inform(Z, Y, "payment instructions", C)),
                                  do_(inform(Z, X, "repayment date", C))},
                                 {do_(inform(Z, X, "no lender found", C))})}});

  std::vector<PlanStep> x_then = x_pledge;
  x_then.push_back(wait_for(after(ActionKind::Pay, Y, X, {}, C)));
  x_then.push_back(do_(ack(X, Y, p, C)));
  x_then.push_back(do_(pay_on(t, X, Y, p + i, C)));
  s.plans.push_back(Plan{X,
                         {wait_for(after(ActionKind::Inform, Z, X, {}, C)), do_(sign(X, C)),
                          do_(inform(X, Z, "signed", C)), wait_for(after(ActionKind::Inform, Y, Z, {}, C)),
                          branch(cond::StageAtLeast{C, Stage::Active}, x_then)}});

  std::vector<PlanStep> y_then = {do_(sign(Y, C)), do_(inform(Y, Z, "signed", C)), do_(pay(Y, X, p, C)),
                                  wait_for(after(ActionKind::Pay, X, Y, {}, C)), do_(ack(Y, X, p + i, C))};
  y_then.insert(y_then.end(), y_release.begin(), y_release.end());
  s.plans.push_back(Plan{Y,
                         {wait_for(after(ActionKind::Inform, Z, Y, {}, C)),
                          branch(cond::FlagIs{willing, true}, y_then, {do_(inform(Y, Z, "declined", C))})}});

  const bool lends = ctx["lender_willing"] == 1;
  s.principals = {X, Y};
  s.lender = Y;
  s.principal = p;
  s.term = Duration{t};
  s.horizon = Date{t};
  s.expected = expect(haram_if(lends && i.sign() > 0), haram_if(lends && i.sign() > 0));
}

void unethical_rain(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity& p = ctx["p"];
  const AgentId X = ctx.id("X"), Y = ctx.id("Y");
  const ContractId R = ctx.id("RAIN");
  const std::string rain = ctx.id("raining");
  give(s.initial, X, Role::Person, p, ctx);
  give(s.initial, Y, Role::Person, 0, ctx);
  s.initial.ground.flags[rain] = ctx["raining"] == 1;
  s.initial.choice_points.push_back(rain);

  Action promise = make(ActionKind::PromisePay, X, Y, p);
  promise.condition = when(cond::FlagIs{rain, true});
  promise.due = Date{2};
  promise.contract = R;
  promise.tags = {EthicalTag::ContingentOnChance};
  promise.reason.label = "pay if it rains the day after tomorrow";
  s.plans.push_back(Plan{X,
                         {do_(promise), wait_for(trig::ByDate{Date{2}}),
                          branch(cond::FlagIs{rain, true}, {do_(pay(X, Y, p, R))})}});
  s.principals = {X, Y};
  s.horizon = Date{3};
}

void unethical_used_car(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity& p = ctx["p"];
  const AgentId X = ctx.id("X"), Y = ctx.id("Y");
  const GoodId car = ctx.id("CAR");
  give(s.initial, X, Role::Person, 0, ctx);
  give(s.initial, Y, Role::Person, p, ctx);
  add_good(s.initial, Good{car, "used car", X, p, p, false});
  Action sale = spot(Y, X, car, p);
  sale.tags = {EthicalTag::UndisclosedInformation};
  sale.reason.label = "seller withholds known defects";
  s.plans.push_back(Plan{Y, {do_(sale)}});
  s.principals = {X, Y};
  s.horizon = Date{0};
}

void unethical_extortion(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity& p = ctx["p"];
  const AgentId X = ctx.id("X"), Y = ctx.id("Y");
  give(s.initial, X, Role::Person, 0, ctx);
  give(s.initial, Y, Role::Person, p, ctx);
  Action threat = make(ActionKind::AssertExpectation, X, Y, p);
  threat.tags = {EthicalTag::Coercion};
  threat.reason.label = "pay for protection or suffer damage";
  s.plans.push_back(Plan{X, {do_(threat)}});
  s.plans.push_back(Plan{Y, {wait_for(after(ActionKind::AssertExpectation, X, Y)), do_(pay(Y, X, p))}});
  s.principals = {X, Y};
  s.horizon = Date{0};
}

void unethical_interest_pair(ScenarioInstance& s, const Ctx& ctx) {
  const Quantity &p = ctx["p"], &c = ctx["c"], &i = ctx["i"];
  const std::int64_t t = as_int(ctx["t"]);
  if (p.sign() <= 0) violation("p must be positive");
  if (c > p) violation("c exceeds p");
  const AgentId X = ctx.id("X"), Y = ctx.id("Y");
  const ContractId L = ctx.id("LP");
  give(s.initial, X, Role::Person, p - c, ctx);
  give(s.initial, Y, Role::Person, i + c, ctx);
  ContractRecord loan = agreement(L, "loan", {X, Y}, Y,
                                  {clause(X, pay(X, Y, p - c), trig::Always{}, 0),
                                   clause(Y, pay(Y, X, p + i), after(ActionKind::Pay, X, Y, {}, L), t)});
  loan.interest = InterestTerms{total_div(i, p), c};
  s.plans.push_back(Plan{Y,
                         {do_(prepare(Y, loan)), do_(sign(Y, L)), wait_for(after(ActionKind::Pay, X, Y, {}, L)),
                          do_([&] {
                            Action a = make(ActionKind::ReceivePayment, Y, X, p - c);
                            a.reason = cite(L, "principal received");
                            return a;
                          }()),
                          do_(pay_on(t, Y, X, p + i, L))}});
  s.plans.push_back(Plan{X,
                         {wait_for(signed_by(L, Y)), do_(sign(X, L)), do_(pay(X, Y, p - c, L, "loan principal")),
                          wait_for(after(ActionKind::Pay, Y, X, {}, L)), do_(ack(X, Y, p + i, L))}});
  s.principals = {X, Y};
  s.lender = X;
  s.principal = p;
  s.term = Duration{t};
  s.horizon = Date{t};
}

struct Entry {
  ScenarioSpec spec;
  std::function<void(ScenarioInstance&, const Ctx&)> build;
};

void merge_into(ScenarioInstance& dst, ScenarioInstance&& src) {
  for (auto& [k, v] : src.initial.ground.agents) dst.initial.ground.agents.emplace(k, v);
  for (auto& [k, v] : src.initial.ground.balances) dst.initial.ground.balances.emplace(k, v);
  for (auto& [k, v] : src.initial.ground.goods) dst.initial.ground.goods.emplace(k, v);
  for (auto& [k, v] : src.initial.ground.flags) dst.initial.ground.flags.emplace(k, v);
  for (auto& c : src.initial.choice_points) dst.initial.choice_points.push_back(c);
  for (auto& pl : src.plans) dst.plans.push_back(std::move(pl));
  for (auto& a : src.principals) dst.principals.push_back(a);
  dst.horizon = std::max(dst.horizon, src.horizon);
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = [] {
    const std::vector<ParamSpec> pi_params = {
        money("p", 1000, "sum saved"),         money("c", 2, "transaction cost"),
        rate("q", Quantity(1, 20), "rate"),    days("t", 365, "term"),
        money("block", 100, "block size of G"), endowment()};
    std::vector<ParamSpec> primed_params = {money("p", 1000, "sum saved"),
                                            money("c", 2, "transaction cost"),
                                            rate("q", Quantity(1, 20), "rate"),
                                            days("t", 365, "term"),
                                            money("block", 300, "block size of G"),
                                            derived_money("p_prime", "price of G, default smallest block multiple >= p"),
                                            endowment()};
    const auto pi = [](Pi v) { return [v](ScenarioInstance& s, const Ctx& c) { tawarruq_pi(s, c, v); }; };
    const std::vector<ParamSpec> ethics_small = {money("p", 100, "sum"), endowment()};
    const std::vector<ParamSpec> rain_params = {money("p", 100, "sum promised"),
                                                flag("raining", true, "whether it rains on the day"), endowment()};
    const std::vector<ParamSpec> pair_params = {money("p", 100, "principal"), money("c", 2, "transaction cost"),
                                                money("i", 10, "interest"), days("t", 365, "term"), endowment()};

    std::vector<Entry> v;
    v.push_back({{"loan_with_interest", "interest-bearing money loan", "conventional loan",
                  {money("p", 100, "principal"), money("i", 10, "interest"), money("c", 0, "cost deducted upfront"),
                   money("c_prime", 0, "cost added to repayment"), days("t", 365, "term"), endowment()}},
                 loan_with_interest});
    v.push_back({{"savings_account_with_interest", "deposit repaid as p - c + q*p after t", "savings account",
                  {money("p", 1000, "deposit"), money("c", 2, "transaction cost"), rate("q", Quantity(1, 20), "rate"),
                   days("t", 365, "term"), endowment()}},
                 savings_account});
    v.push_back({{"ina_two_party", "spot sale then credit repurchase of the same item", "sale-repurchase",
                  {money("p", 100, "spot price"), money("i", 10, "markup on repurchase"), days("t", 365, "term"),
                   flag("single_contract", false, "both sales in one contract"), endowment()}},
                 ina_two_party});
    v.push_back({{"tawarruq_classic", "three-party monetization of an asset", "tawarruq",
                  {money("p", 100, "spot price"), money("i", 10, "markup on credit"), days("t", 365, "term"),
                   endowment()}},
                 tawarruq_classic});
    v.push_back({{"contractus_trinus", "partnership, sale of profit and insurance of principal", "triple contract",
                  {money("p", 100, "capital"), money("profit", 15, "fixed profit bought"),
                   money("premium", 5, "insurance premium"), days("t", 365, "term"), endowment()}},
                 contractus_trinus});
    v.push_back({{"murabaha", "bank buys a good and resells it at a markup on credit", "cost-plus resale",
                  {money("p", 100, "cost of the good"), money("i", 10, "markup"), money("c", 2, "mediation fee"),
                   days("t", 365, "term"), endowment()}},
                 murabaha});
    v.push_back({{"tawarruq_pi", "savings via a prepared good, prices in whole blocks", "progression architecture",
                  pi_params},
                 pi(Pi::Plain)});
    v.push_back({{"tawarruq_pi_prime", "as tawarruq_pi with block rounding and upfront rebate",
                  "progression architecture", primed_params},
                 pi(Pi::Prime)});
    v.push_back({{"tawarruq_pi_double_prime", "contracts C1, C2, C3 signed before trading",
                  "progression architecture", primed_params},
                 pi(Pi::DoublePrime)});
    v.push_back({{"tawarruq_pi_triple_prime", "contracts prepared C1..C3, signed C3, C2, C1",
                  "progression architecture", primed_params},
                 pi(Pi::TriplePrime)});
    v.push_back({{"tawarruq_single_contract", "one contract with three signatures", "progression architecture",
                  primed_params},
                 pi(Pi::Single)});
    v.push_back({{"brokered_loan", "broker arranges a loan with a guarantee", "brokered loan",
                  {money("p", 100, "principal"), money("i", 10, "interest"), days("t", 365, "term"),
                   choice("guarantee", 0, "0 pledge_of_goods, 1 goods_on_default, 2 income_share"),
                   flag("lender_willing", true, "whether the lender signs"), endowment()}},
                 brokered_loan});
    v.push_back({{"unethical_rain", "payment promised on rainfall", "ethics", rain_params},
                 [](ScenarioInstance& s, const Ctx& c) {
                   unethical_rain(s, c);
                   s.expected = expect(Verdict::Haram, Verdict::Halal);
                 }});
    v.push_back({{"unethical_used_car", "sale with undisclosed defects", "ethics", ethics_small},
                 [](ScenarioInstance& s, const Ctx& c) {
                   unethical_used_car(s, c);
                   s.expected = expect(Verdict::Haram, Verdict::Halal);
                 }});
    v.push_back({{"unethical_extortion", "payment under threat", "ethics", ethics_small},
                 [](ScenarioInstance& s, const Ctx& c) {
                   unethical_extortion(s, c);
                   s.expected = expect(Verdict::Haram, Verdict::Halal);
                 }});
    v.push_back({{"unethical_interest_pair", "loan with interest stated as a pair of transfers", "ethics",
                  pair_params},
                 [](ScenarioInstance& s, const Ctx& c) {
                   unethical_interest_pair(s, c);
                   s.expected = expect(haram_if(c["i"].sign() > 0), haram_if((c["i"] + c["c"]).sign() > 0));
                 }});
    v.push_back({{"unethical_examples", "the four unethical examples side by side", "ethics",
                  {money("p", 100, "sum"), money("c", 2, "transaction cost"), money("i", 10, "interest"),
                   days("t", 365, "term"), flag("raining", true, "whether it rains"), endowment()}},
                 [](ScenarioInstance& s, const Ctx& c) {
                   const std::vector<std::function<void(ScenarioInstance&, const Ctx&)>> parts = {
                       unethical_rain, unethical_used_car, unethical_extortion, unethical_interest_pair};
                   for (std::size_t k = 0; k < parts.size(); ++k) {
                     ScenarioInstance part;
                     parts[k](part, Ctx{c.p, c.sfx + std::to_string(k + 1)});
                     merge_into(s, std::move(part));
                   }
                   s.expected = expect(Verdict::Haram, Verdict::Haram);
                 }});
    return v;
  }();
  return all;
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a = {
      {"pi", "tawarruq_pi"},
      {"pi_prime", "tawarruq_pi_prime"},
      {"pi_double_prime", "tawarruq_pi_double_prime"},
      {"pi_triple_prime", "tawarruq_pi_triple_prime"},
  };
  return a;
}

const Entry* find_entry(std::string_view name) {
  std::string key(name);
  if (auto it = aliases().find(key); it != aliases().end()) key = it->second;
  for (const auto& e : entries()) {
    if (e.spec.name == key) return &e;
  }
  return nullptr;
}

}  // namespace

const std::vector<ScenarioSpec>& catalogue() {
  static const std::vector<ScenarioSpec> specs = [] {
    std::vector<ScenarioSpec> out;
    for (const auto& e : entries()) out.push_back(e.spec);
    return out;
  }();
  return specs;
}

const ScenarioSpec* find_scenario(std::string_view name) {
  const Entry* e = find_entry(name);
  return e ? &e->spec : nullptr;
}

ScenarioInstance instantiate(std::string_view name, const Params& overrides) {
  const Entry* e = find_entry(name);
  if (!e) throw Error(ErrorCode::UnknownScenario, "no built-in scenario named '" + std::string(name) + "'");
  ScenarioInstance s;
  s.name = e->spec.name;
  s.anchor = e->spec.anchor;
  s.params = resolve(e->spec, overrides);
  e->build(s, Ctx{s.params, ""});
  return s;
}

Quantity smallest_block_multiple(const Quantity& price, const Quantity& block) {
  if (block.sign() <= 0) throw Error(ErrorCode::ParameterViolation, "block size must be positive");
  const Quantity blocks = price / block;
  // Ceiling of a rational: integer division rounds toward zero.
  BigInt n = blocks.numerator() / blocks.denominator();
  if (Quantity(n, 1) < blocks) n += 1;
  return Quantity(n, 1) * block;
}

std::pair<std::string, Quantity> parse_param(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorCode::ParameterViolation, "expected key=value, got '" + std::string(text) + "'");
  }
  std::string key(text.substr(0, eq));
  try {
    return {key, Quantity::parse(text.substr(eq + 1))};
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ParameterViolation, key + ": " + e.what());
  }
}

std::string_view to_string(ParamKind k) {
  switch (k) {
    case ParamKind::Money:
      return "money";
    case ParamKind::Rate:
      return "rate";
    case ParamKind::Days:
      return "days";
    case ParamKind::Flag:
      return "flag";
    case ParamKind::Choice:
      return "choice";
  }
  return "?";
}

}  // namespace rpsf
