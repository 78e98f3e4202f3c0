#include "rpsf/json_io.hpp"

#include <algorithm>
#include <fstream>

namespace rpsf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidAction, "scenario file: " + what); }

template <class E, class F>
E parse_enum(const Json& j, F from_string, const char* what) {
  const auto s = j.get<std::string>();
  auto v = from_string(s);
  if (!v) bad(std::string("unknown ") + what + " '" + s + "'");
  return *v;
}

template <class T>
void put_opt(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get_opt(const Json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null()) v = j.at(key).get<T>();
}

void put_str(Json& j, const char* key, const std::string& s) {
  if (!s.empty()) j[key] = s;
}

std::string get_str(const Json& j, const char* key) {
  return j.contains(key) ? j.at(key).get<std::string>() : std::string{};
}

}  // namespace

void to_json(Json& j, const Quantity& q) { j = q.to_string(); }

void from_json(const Json& j, Quantity& q) {
  if (j.is_number_integer()) {
    q = Quantity(j.get<std::int64_t>());
  } else if (j.is_string()) {
    try {
      q = Quantity::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      bad(e.what());
    }
  } else {
    bad("quantities are strings such as \"3/4\" or integers");
  }
}

void to_json(Json& j, const Date& d) { j = d.day; }
void from_json(const Json& j, Date& d) { d.day = j.get<std::int64_t>(); }

void to_json(Json& j, const Reason& r) {
  j = Json::object();
  put_str(j, "label", r.label);
  if (!r.contracts.empty()) j["contracts"] = r.contracts;
  if (!r.events.empty()) j["events"] = r.events;
}

void from_json(const Json& j, Reason& r) {
  r.label = get_str(j, "label");
  if (j.contains("contracts")) r.contracts = j.at("contracts").get<std::vector<ContractId>>();
  if (j.contains("events")) r.events = j.at("events").get<std::vector<SeqNo>>();
}

void to_json(Json& j, const EventPattern& p) {
  j = Json{{"kind", to_string(p.kind)}};
  put_opt(j, "actor", p.actor);
  put_opt(j, "counterparty", p.counterparty);
  put_opt(j, "good", p.good);
  put_opt(j, "contract", p.contract);
  put_opt(j, "sum", p.sum);
}

void from_json(const Json& j, EventPattern& p) {
  p.kind = parse_enum<ActionKind>(j.at("kind"), action_kind_from_string, "action kind");
  get_opt(j, "actor", p.actor);
  get_opt(j, "counterparty", p.counterparty);
  get_opt(j, "good", p.good);
  get_opt(j, "contract", p.contract);
  get_opt(j, "sum", p.sum);
}

void to_json(Json& j, const Condition& c) {
  j = std::visit(overloaded{
                     [](const cond::FlagIs& x) { return Json{{"type", "flag"}, {"flag", x.flag}, {"value", x.value}}; },
                     [](const cond::Owns& x) { return Json{{"type", "owns"}, {"agent", x.agent}, {"good", x.good}}; },
                     [](const cond::BalanceAtLeast& x) {
                       return Json{{"type", "balance_at_least"}, {"agent", x.agent}, {"amount", x.amount}};
                     },
                     [](const cond::StageAtLeast& x) {
                       return Json{{"type", "stage_at_least"}, {"contract", x.contract}, {"stage", to_string(x.stage)}};
                     },
                     [](const cond::SignedBy& x) {
                       return Json{{"type", "signed_by"}, {"contract", x.contract}, {"agent", x.agent}};
                     },
                     [](const cond::EventCountAtLeast& x) {
                       return Json{{"type", "event_count_at_least"}, {"count", x.count}};
                     },
                 },
                 c);
}

void from_json(const Json& j, Condition& c) {
  const auto type = j.at("type").get<std::string>();
  if (type == "flag") {
    c = cond::FlagIs{j.at("flag").get<std::string>(), j.value("value", true)};
  } else if (type == "owns") {
    c = cond::Owns{j.at("agent").get<std::string>(), j.at("good").get<std::string>()};
  } else if (type == "balance_at_least") {
    c = cond::BalanceAtLeast{j.at("agent").get<std::string>(), j.at("amount").get<Quantity>()};
  } else if (type == "stage_at_least") {
    c = cond::StageAtLeast{j.at("contract").get<std::string>(),
                           parse_enum<Stage>(j.at("stage"), stage_from_string, "stage")};
  } else if (type == "signed_by") {
    c = cond::SignedBy{j.at("contract").get<std::string>(), j.at("agent").get<std::string>()};
  } else if (type == "event_count_at_least") {
    c = cond::EventCountAtLeast{j.at("count").get<std::uint64_t>()};
  } else {
    bad("unknown condition type '" + type + "'");
  }
}

void to_json(Json& j, const Trigger& t) {
  j = std::visit(overloaded{
                     [](const trig::Always&) { return Json{{"type", "always"}}; },
                     [](const trig::AfterEvent& x) { return Json{{"type", "after_event"}, {"pattern", x.pattern}}; },
                     [](const trig::ByDate& x) { return Json{{"type", "by_date"}, {"date", x.date}}; },
                     [](const trig::ConditionMet& x) { return Json{{"type", "condition"}, {"condition", x.condition}}; },
                 },
                 t);
}

void from_json(const Json& j, Trigger& t) {
  const auto type = j.at("type").get<std::string>();
  if (type == "always") {
    t = trig::Always{};
  } else if (type == "after_event") {
    t = trig::AfterEvent{j.at("pattern").get<EventPattern>()};
  } else if (type == "by_date") {
    t = trig::ByDate{j.at("date").get<Date>()};
  } else if (type == "condition") {
    t = trig::ConditionMet{j.at("condition").get<Condition>()};
  } else {
    bad("unknown trigger type '" + type + "'");
  }
}

void to_json(Json& j, const Good& g) {
  j = Json{{"id", g.id}, {"kind", g.kind}, {"owner", g.owner}, {"block_size", g.block_size}, {"is_money", g.is_money}};
  put_opt(j, "market_value", g.market_value);
}

void from_json(const Json& j, Good& g) {
  g.id = j.at("id").get<std::string>();
  g.kind = get_str(j, "kind");
  g.owner = get_str(j, "owner");
  g.block_size = j.contains("block_size") ? j.at("block_size").get<Quantity>() : Quantity(1);
  g.is_money = j.value("is_money", false);
  get_opt(j, "market_value", g.market_value);
}

void to_json(Json& j, const Action& a) {
  j = Json{{"kind", to_string(a.kind)}, {"actor", a.actor}};
  put_str(j, "counterparty", a.counterparty);
  if (!a.sum.is_zero()) j["sum"] = a.sum;
  put_opt(j, "upfront", a.upfront);
  put_opt(j, "secondary", a.secondary);
  put_opt(j, "date", a.date);
  put_opt(j, "due", a.due);
  put_str(j, "channel", a.channel);
  if (!a.reason.label.empty() || !a.reason.contracts.empty() || !a.reason.events.empty()) j["reason"] = a.reason;
  put_str(j, "good", a.good);
  put_str(j, "contract", a.contract);
  put_opt(j, "condition", a.condition);
  if (a.signing) j["signing"] = to_string(*a.signing);
  put_opt(j, "good_spec", a.good_spec);
  if (a.draft) j["draft"] = *a.draft;
  if (!a.tags.empty()) {
    Json tags = Json::array();
    for (auto t : a.tags) tags.push_back(to_string(t));
    j["tags"] = tags;
  }
}

void from_json(const Json& j, Action& a) {
  a = Action{};
  a.kind = parse_enum<ActionKind>(j.at("kind"), action_kind_from_string, "action kind");
  a.actor = j.at("actor").get<std::string>();
  a.counterparty = get_str(j, "counterparty");
  if (j.contains("sum")) a.sum = j.at("sum").get<Quantity>();
  get_opt(j, "upfront", a.upfront);
  get_opt(j, "secondary", a.secondary);
  get_opt(j, "date", a.date);
  get_opt(j, "due", a.due);
  a.channel = get_str(j, "channel");
  if (j.contains("reason")) a.reason = j.at("reason").get<Reason>();
  a.good = get_str(j, "good");
  a.contract = get_str(j, "contract");
  get_opt(j, "condition", a.condition);
  if (j.contains("signing")) a.signing = parse_enum<SigningMode>(j.at("signing"), signing_mode_from_string, "signing mode");
  get_opt(j, "good_spec", a.good_spec);
  if (j.contains("draft")) a.draft = std::make_shared<const ContractRecord>(j.at("draft").get<ContractRecord>());
  if (j.contains("tags")) {
    for (const auto& t : j.at("tags")) a.tags.insert(parse_enum<EthicalTag>(t, ethical_tag_from_string, "tag"));
  }
}

void to_json(Json& j, const Clause& c) {
  j = Json{{"obliged", c.obliged}, {"trigger", c.trigger}, {"action", c.action}};
  put_opt(j, "deadline", c.deadline);
}

void from_json(const Json& j, Clause& c) {
  c.obliged = j.at("obliged").get<std::string>();
  c.trigger = j.contains("trigger") ? j.at("trigger").get<Trigger>() : Trigger{trig::Always{}};
  c.action = j.at("action").get<Action>();
  get_opt(j, "deadline", c.deadline);
}

void to_json(Json& j, const ContractRecord& c) {
  j = Json{{"id", c.id},
           {"kind", c.kind},
           {"parties", c.parties},
           {"initiator", c.initiator},
           {"clauses", c.clauses},
           {"references", c.references},
           {"signatures", c.signatures},
           {"stage", to_string(c.stage)}};
  if (c.interest) j["interest"] = Json{{"rate", c.interest->rate}, {"fixed_cost", c.interest->fixed_cost}};
  if (!c.reason.label.empty() || !c.reason.contracts.empty() || !c.reason.events.empty()) j["reason"] = c.reason;
}

void from_json(const Json& j, ContractRecord& c) {
  c = ContractRecord{};
  c.id = get_str(j, "id");
  c.kind = get_str(j, "kind");
  c.parties = j.at("parties").get<std::set<AgentId>>();
  c.initiator = j.at("initiator").get<std::string>();
  if (j.contains("clauses")) c.clauses = j.at("clauses").get<std::vector<Clause>>();
  if (j.contains("references")) c.references = j.at("references").get<std::set<ContractId>>();
  if (j.contains("signatures")) c.signatures = j.at("signatures").get<std::set<AgentId>>();
  if (j.contains("stage")) c.stage = parse_enum<Stage>(j.at("stage"), stage_from_string, "stage");
  if (j.contains("interest")) {
    const auto& i = j.at("interest");
    c.interest = InterestTerms{i.at("rate").get<Quantity>(),
                               i.contains("fixed_cost") ? i.at("fixed_cost").get<Quantity>() : Quantity{}};
  }
  if (j.contains("reason")) c.reason = j.at("reason").get<Reason>();
}

void to_json(Json& j, const PlanStep& s) {
  j = std::visit(overloaded{
                     [](const step::Do& d) { return Json{{"do", d.action}}; },
                     [](const step::WaitFor& w) { return Json{{"wait_for", w.trigger}}; },
                     [](const step::Branch& b) {
                       return Json{{"branch", Json{{"if", b.condition}, {"then", b.then_steps}, {"else", b.else_steps}}}};
                     },
                     [](const step::Stop&) { return Json{{"stop", true}}; },
                 },
                 s.value);
}

void from_json(const Json& j, PlanStep& s) {
  if (j.contains("do")) {
    s.value = step::Do{j.at("do").get<Action>()};
  } else if (j.contains("wait_for")) {
    s.value = step::WaitFor{j.at("wait_for").get<Trigger>()};
  } else if (j.contains("branch")) {
    const auto& b = j.at("branch");
    step::Branch br;
    br.condition = b.at("if").get<Condition>();
    if (b.contains("then")) br.then_steps = b.at("then").get<std::vector<PlanStep>>();
    if (b.contains("else")) br.else_steps = b.at("else").get<std::vector<PlanStep>>();
    s.value = std::move(br);
  } else if (j.contains("stop")) {
    s.value = step::Stop{};
  } else {
    bad("plan step needs one of do, wait_for, branch, stop");
  }
}

void to_json(Json& j, const Plan& p) { j = Json{{"agent", p.agent}, {"steps", p.steps}}; }

void from_json(const Json& j, Plan& p) {
  p.agent = j.at("agent").get<std::string>();
  p.steps = j.at("steps").get<std::vector<PlanStep>>();
}

void to_json(Json& j, const Event& e) {
  j = Json{{"seq", e.seq}, {"date", e.date}, {"action", e.action}, {"delta", e.delta}};
}

void from_json(const Json& j, Event& e) {
  e.seq = j.at("seq").get<SeqNo>();
  e.date = j.at("date").get<Date>();
  e.action = j.at("action").get<Action>();
  e.delta = get_str(j, "delta");
}

void to_json(Json& j, const WorldState& w) {
  Json agents = Json::array();
  for (const auto& [id, a] : w.ground.agents) {
    agents.push_back(Json{{"name", id}, {"role", to_string(a.role)}, {"balance", w.balance(id)}});
  }
  Json goods = Json::array();
  for (const auto& [_, g] : w.ground.goods) goods.push_back(g);
  Json contracts = Json::array();
  for (const auto& [_, c] : w.contracts) contracts.push_back(c);
  j = Json{{"now", w.now},
           {"overdraft", w.ground.overdraft},
           {"include_reason_text", w.include_reason_text},
           {"agents", agents},
           {"goods", goods},
           {"flags", w.ground.flags},
           {"choice_points", w.choice_points},
           {"contracts", contracts},
           {"history", w.history}};
}

void from_json(const Json& j, WorldState& w) {
  w = WorldState{};
  if (j.contains("now")) w.now = j.at("now").get<Date>();
  w.ground.overdraft = j.value("overdraft", false);
  w.include_reason_text = j.value("include_reason_text", false);
  for (const auto& a : j.at("agents")) {
    const auto role = a.contains("role") ? parse_enum<Role>(a.at("role"), role_from_string, "role") : Role::Person;
    add_agent(w, a.at("name").get<std::string>(), role,
              a.contains("balance") ? a.at("balance").get<Quantity>() : Quantity{});
  }
  if (j.contains("goods")) {
    for (const auto& g : j.at("goods")) add_good(w, g.get<Good>());
  }
  if (j.contains("flags")) w.ground.flags = j.at("flags").get<std::map<std::string, bool>>();
  if (j.contains("choice_points")) w.choice_points = j.at("choice_points").get<std::vector<std::string>>();
  if (j.contains("contracts")) {
    for (const auto& c : j.at("contracts")) {
      auto rec = c.get<ContractRecord>();
      w.contracts.emplace(rec.id, std::move(rec));
    }
  }
  if (j.contains("history")) w.history = j.at("history").get<HistoryLog>();
}

void to_json(Json& j, const Flow& f) {
  j = Json{{"payer", f.payer}, {"payee", f.payee}, {"amount", f.amount}, {"date", f.date}};
}

void from_json(const Json& j, Flow& f) {
  f.payer = j.at("payer").get<std::string>();
  f.payee = j.at("payee").get<std::string>();
  f.amount = j.at("amount").get<Quantity>();
  f.date = j.at("date").get<Date>();
}

void to_json(Json& j, const FlowTrace& t) { j = t.flows; }
void from_json(const Json& j, FlowTrace& t) { t = make_trace(j.get<std::vector<Flow>>()); }

Json net_position_json(const NetPosition& pos) {
  Json j = Json::object();
  for (const auto& [agent, days] : pos) {
    Json d = Json::object();
    for (const auto& [date, q] : days) d[std::to_string(date.day)] = q;
    j[agent] = d;
  }
  return j;
}

void to_json(Json& j, const Progression& p) {
  Json turns = Json::array();
  for (const auto& t : p.turns) turns.push_back(Json{{"cycle", t.cycle}, {"agent", t.agent}, {"seq", t.seq}});
  Json balances = Json::object();
  for (const auto& [id, b] : p.final_world.ground.balances) balances[id] = b;
  Json owners = Json::object();
  for (const auto& [id, g] : p.final_world.ground.goods) owners[id] = g.owner;
  Json stages = Json::object();
  for (const auto& [id, c] : p.final_world.contracts) stages[id] = to_string(c.stage);
  j = Json{{"status", to_string(p.status)},
           {"events", p.events},
           {"turns", turns},
           {"final", Json{{"now", p.final_world.now}, {"balances", balances}, {"owners", owners}, {"stages", stages}}}};
  if (!p.choices.empty()) j["choices"] = p.choices;
}

void to_json(Json& j, const Finding& f) {
  j = Json{{"rule", f.rule}, {"events", f.events}, {"contracts", f.contracts}, {"detail", f.detail}};
}

void from_json(const Json& j, Finding& f) {
  f.rule = j.at("rule").get<std::string>();
  f.events = j.value("events", std::vector<SeqNo>{});
  f.contracts = j.value("contracts", std::vector<ContractId>{});
  f.detail = get_str(j, "detail");
}

void to_json(Json& j, const Judgement& jd) { j = Json{{"verdict", to_string(jd.verdict)}, {"reasons", jd.reasons}}; }

void from_json(const Json& j, Judgement& jd) {
  jd.verdict = parse_enum<Verdict>(j.at("verdict"), verdict_from_string, "verdict");
  jd.reasons = j.at("reasons").get<std::vector<Finding>>();
}

void to_json(Json& j, const LegalPosition& p) {
  Json rules = Json::array();
  for (const auto& r : p.rules) {
    rules.push_back(Json{{"name", r.name}, {"detector", to_string(r.detector)}, {"verdict", to_string(r.verdict)}});
  }
  j = Json{{"name", p.name}, {"mode", to_string(p.mode)}, {"rules", rules}, {"default", to_string(p.default_verdict)}};
}

void from_json(const Json& j, LegalPosition& p) {
  p.name = j.at("name").get<std::string>();
  p.mode = j.contains("mode") ? parse_enum<PositionMode>(j.at("mode"), position_mode_from_string, "mode")
                              : PositionMode::Descriptive;
  p.rules.clear();
  for (const auto& r : j.value("rules", Json::array())) {
    const auto detector = parse_enum<Detector>(r.at("detector"), detector_from_string, "detector");
    p.rules.push_back(Rule{r.contains("name") ? r.at("name").get<std::string>() : std::string(to_string(detector)),
                           detector,
                           r.contains("verdict") ? parse_enum<Verdict>(r.at("verdict"), verdict_from_string, "verdict")
                                                 : Verdict::Haram});
  }
  p.default_verdict =
      j.contains("default") ? parse_enum<Verdict>(j.at("default"), verdict_from_string, "verdict") : Verdict::Halal;
}

void to_json(Json& j, const ScenarioSpec& s) {
  Json params = Json::array();
  for (const auto& p : s.params) {
    Json e{{"name", p.name}, {"kind", to_string(p.kind)}, {"help", p.help}};
    if (p.default_value) {
      e["default"] = *p.default_value;
    } else {
      e["default"] = nullptr;
    }
    params.push_back(e);
  }
  j = Json{{"name", s.name}, {"summary", s.summary}, {"anchor", s.anchor}, {"params", params}};
}

ScenarioFile parse_scenario(const Json& j) {
  if (!j.is_object()) bad("top level must be an object");
  if (j.value("format", std::string{}) != kScenarioFormat) {
    bad(std::string("format must be \"") + kScenarioFormat + "\"");
  }
  ScenarioFile f;
  try {
    if (j.contains("builtin")) {
      Params params;
      const Json given = j.value("params", Json::object());
      for (const auto& [k, v] : given.items()) params[k] = v.get<Quantity>();
      f.instance = instantiate(j.at("builtin").get<std::string>(), params);
    } else {
      ScenarioInstance& s = f.instance;
      s.name = j.value("name", std::string("custom"));
      s.anchor = j.value("anchor", std::string{});
      s.initial = j.at("world").get<WorldState>();
      s.plans = j.at("plans").get<std::vector<Plan>>();
      s.principals = j.value("principals", std::vector<AgentId>{});
      s.horizon = j.contains("horizon") ? j.at("horizon").get<Date>() : kNoHorizon;
      get_opt(j, "lender", s.lender);
      get_opt(j, "principal", s.principal);
      if (j.contains("term")) s.term = Duration{j.at("term").get<std::int64_t>()};
      const Json expected = j.value("expected", Json::object());
      for (const auto& [k, v] : expected.items()) {
        s.expected[k] = parse_enum<Verdict>(v, verdict_from_string, "verdict");
      }
    }
    if (j.contains("name") && j.contains("builtin")) f.instance.name = j.at("name").get<std::string>();
    for (const auto& p : j.value("positions", Json::array())) f.positions.push_back(p.get<LegalPosition>());
  } catch (const Json::exception& e) {
    bad(e.what());
  }
  return f;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::UnknownReference, "cannot open scenario file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(e.what());
  }
  return parse_scenario(j);
}

Json scenario_json(const ScenarioInstance& s, const std::vector<LegalPosition>& positions) {
  Json j{{"format", kScenarioFormat},
         {"name", s.name},
         {"world", s.initial},
         {"plans", s.plans},
         {"principals", s.principals},
         {"horizon", s.horizon}};
  put_str(j, "anchor", s.anchor);
  put_opt(j, "lender", s.lender);
  put_opt(j, "principal", s.principal);
  if (s.term) j["term"] = s.term->days;
  if (!s.expected.empty()) {
    Json e = Json::object();
    for (const auto& [k, v] : s.expected) e[k] = to_string(v);
    j["expected"] = e;
  }
  if (!positions.empty()) j["positions"] = positions;
  return j;
}

Json synthesis_json(const SynthesisResult& r, const WorldState& seed) {
  Json witnesses = Json::array();
  for (std::size_t k = 0; k < r.witnesses.size(); ++k) {
    const Witness& w = r.witnesses[k];
    ScenarioInstance s;
    s.name = "witness-" + std::to_string(k + 1);
    s.initial = seed;
    s.plans = witness_plans(w);
    s.principals = {"X", "Y", "Z"};
    s.horizon = w.progression.final_world.now;
    const auto credits = std::count_if(w.actions.begin(), w.actions.end(),
                                       [](const Action& a) { return a.kind == ActionKind::BuyOnCredit; });
    witnesses.push_back(Json{{"actions", w.actions},
                             {"flows", monetary_projection(w.progression)},
                             {"credit_sales", credits},
                             {"scenario", scenario_json(s)}});
  }
  return Json{{"found", r.found},
              {"bound", r.bound},
              {"explored", r.explored},
              {"reductions", r.reductions},
              {"witnesses", witnesses}};
}

}  // namespace rpsf
