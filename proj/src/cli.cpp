#include "rpsf/cli.hpp"

#include "rpsf/json_io.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

namespace rpsf {

namespace {

struct Options {
  std::string scenario;
  std::string scenario_b;
  std::vector<std::string> params;
  std::vector<std::string> params_a;
  std::vector<std::string> params_b;
  std::string scenario_file;
  std::string position = "STRICT_DESCRIPTIVE";
  std::string strategy = "round-robin";
  std::uint64_t seed = 0;
  std::size_t bound = 0;
  std::int64_t horizon = -1;
  std::string perspective = "all";
  std::string catalogue;
  std::string format = "text";
  bool verbose = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Params parse_params(const std::vector<std::string>& raw) {
  Params out;
  for (const auto& r : raw) {
    auto [k, v] = parse_param(r);
    out[k] = v;
  }
  return out;
}

ScenarioFile load(const Options& o, const std::string& name, const std::vector<std::string>& params) {
  if (!o.scenario_file.empty() && name.empty()) {
    ScenarioFile f = load_scenario_file(o.scenario_file);
    if (!params.empty()) throw UsageError("--param applies to built-in scenarios only");
    return f;
  }
  if (name.empty()) throw UsageError("a scenario name or --scenario-file is required");
  return ScenarioFile{instantiate(name, parse_params(params)), {}};
}

Date horizon_of(const Options& o, const ScenarioInstance& s) {
  return o.horizon >= 0 ? Date{o.horizon} : s.horizon;
}

ScheduleStrategy strategy_of(const Options& o) {
  if (o.strategy == "round-robin") return strategy::RoundRobin{};
  if (o.strategy == "seeded") return strategy::SeededRandom{o.seed};
  if (o.strategy == "exhaustive") return strategy::Exhaustive{};
  throw UsageError("unknown strategy '" + o.strategy + "' (round-robin, seeded, exhaustive)");
}

Perspective perspective_of(const std::string& text) {
  Perspective p;
  if (text == "all" || text.empty()) return p;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) p.agents.insert(part);
  }
  return p;
}

Progression execute(const Options& o, const ScenarioInstance& s) {
  return run(s.initial, s.plans, strategy_of(o), horizon_of(o, s));
}

void print_events(std::ostream& out, const std::vector<Event>& events) {
  for (const auto& e : events) {
    out << "#" << e.seq << " day " << e.date.day << ": " << describe(e.action);
    if (!e.delta.empty()) out << "  [" << e.delta << "]";
    out << "\n";
  }
}

std::string signed_str(const Quantity& q) { return (q.sign() > 0 ? "+" : "") + q.to_string(); }

Json balance_changes(const WorldState& initial, const WorldState& final_world) {
  Json j = Json::object();
  for (const auto& [id, _] : final_world.ground.agents) j[id] = final_world.balance(id) - initial.balance(id);
  return j;
}

const LegalPosition& position_of(const Options& o, const ScenarioFile& f) {
  for (const auto& p : f.positions) {
    if (p.name == o.position) return p;
  }
  if (const auto* p = find_position(o.position)) return *p;
  throw UsageError("unknown position '" + o.position + "'");
}

int cmd_list(const Options& o, std::ostream& out) {
  if (o.format == "json") {
    Json j = Json::array();
    for (const auto& s : catalogue()) j.push_back(s);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& s : catalogue()) {
    out << s.name << "  (" << s.anchor << ")  " << s.summary << "\n";
    for (const auto& p : s.params) {
      out << "    " << p.name << " [" << to_string(p.kind) << "] = "
          << (p.default_value ? p.default_value->to_string() : std::string("derived")) << "  " << p.help << "\n";
    }
  }
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out) {
  const ScenarioFile f = load(o, o.scenario, o.params);
  const ScenarioInstance& s = f.instance;
  const Progression p = execute(o, s);
  if (o.format == "json") {
    Json j{{"scenario", s.name},
           {"params", s.params},
           {"progression", p},
           {"flows", monetary_projection(p)},
           {"net_position", net_position_json(net_position(monetary_projection(p)))},
           {"balance_changes", balance_changes(s.initial, p.final_world)}};
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "scenario " << s.name << ": " << p.events.size() << " events, " << to_string(p.status) << "\n";
  print_events(out, p.events);
  for (const auto& [id, g] : p.final_world.ground.goods) {
    auto it = s.initial.ground.goods.find(id);
    out << "owner " << id << ": " << (it == s.initial.ground.goods.end() ? std::string("(new)") : it->second.owner)
        << " -> " << g.owner << "\n";
  }
  for (const auto& [id, c] : p.final_world.contracts) out << "contract " << id << ": " << to_string(c.stage) << "\n";
  out << "balances at day " << p.final_world.now.day << ":";
  for (const auto& [id, _] : p.final_world.ground.agents) {
    out << " " << id << ":" << signed_str(p.final_world.balance(id) - s.initial.balance(id));
  }
  out << "\n";
  return kExitOk;
}

int cmd_judge(const Options& o, std::ostream& out) {
  const ScenarioFile f = load(o, o.scenario, o.params);
  const LegalPosition& pos = position_of(o, f);
  const Progression p = execute(o, f.instance);
  const Judgement j = judge(pos, f.instance, p);
  if (o.format == "json") {
    out << Json{{"scenario", f.instance.name}, {"position", pos.name}, {"judgement", j}}.dump(2) << "\n";
  } else {
    if (o.verbose) print_events(out, p.events);
    out << f.instance.name << " under " << pos.name << ": " << to_string(j.verdict) << "\n";
    for (const auto& r : j.reasons) {
      out << "  " << r.rule << ": " << r.detail;
      if (!r.events.empty()) {
        out << " (events";
        for (auto e : r.events) out << " #" << e;
        out << ")";
      }
      out << "\n";
    }
  }
  switch (j.verdict) {
    case Verdict::Halal:
      return kExitOk;
    case Verdict::Haram:
      return kExitHaram;
    case Verdict::Undecided:
      return kExitUndecided;
  }
  return kExitFailure;
}

int cmd_compare(const Options& o, std::ostream& out) {
  if (o.scenario.empty() || o.scenario_b.empty()) throw UsageError("compare needs two scenario names");
  std::vector<std::string> pa = o.params;
  pa.insert(pa.end(), o.params_a.begin(), o.params_a.end());
  const ScenarioFile a = load(o, o.scenario, pa);
  const ScenarioFile b = load(o, o.scenario_b, o.params_b);
  const FlowTrace ta = monetary_projection(execute(o, a.instance));
  const FlowTrace tb = monetary_projection(execute(o, b.instance));
  const Perspective persp = perspective_of(o.perspective);
  const bool eq = equivalent(ta, tb, persp);
  if (o.format == "json") {
    out << Json{{"a", a.instance.name},
                {"b", b.instance.name},
                {"perspective", persp.all() ? Json("all") : Json(persp.agents)},
                {"equivalent", eq},
                {"flows_a", ta},
                {"flows_b", tb},
                {"net_a", net_position_json(net_position(ta))},
                {"net_b", net_position_json(net_position(tb))}}
                .dump(2)
        << "\n";
  } else {
    const auto show = [&](const char* tag, const std::string& name, const FlowTrace& t) {
      out << tag << " " << name << ":\n";
      for (const auto& [agent, days] : net_position(t)) {
        out << "  " << agent << ":";
        for (const auto& [d, q] : days) out << " " << signed_str(q) << " @" << d.day;
        out << "\n";
      }
    };
    show("a", a.instance.name, ta);
    show("b", b.instance.name, tb);
    out << (eq ? "equivalent" : "not equivalent") << " from perspective " << (persp.all() ? "all" : o.perspective)
        << "\n";
  }
  return eq ? kExitOk : kExitNotEquivalent;
}

int cmd_synthesize(const Options& o, std::ostream& out) {
  const std::string target_name = o.scenario.empty() ? "savings_account_with_interest" : o.scenario;
  const ScenarioFile f = load(o, target_name, o.params);
  const FlowTrace target = monetary_projection(execute(o, f.instance));
  SynthesisConfig cfg;
  cfg.bound = o.bound == 0 ? 6 : o.bound;
  cfg.perspective = perspective_of(o.perspective);
  if (o.catalogue.empty()) {
    cfg.catalogue = all_primitives();
  } else {
    std::stringstream ss(o.catalogue);
    std::string part;
    while (std::getline(ss, part, ',')) {
      auto prim = primitive_from_string(part);
      if (!prim) throw UsageError("unknown primitive '" + part + "'");
      cfg.catalogue.insert(*prim);
    }
  }
  const SynthesisResult r = synthesize(target, cfg);
  if (o.format == "json") {
    out << synthesis_json(r, synthesis_seed(make_trace(target.flows), cfg.bound)).dump(2) << "\n";
    return kExitOk;
  }
  out << "target " << f.instance.name << ", bound " << r.bound << ", explored " << r.explored << " sequences\n";
  for (const auto& red : r.reductions) out << "  reduction: " << red << "\n";
  out << (r.found ? "found " + std::to_string(r.witnesses.size()) + " witness(es)" : std::string("no witness"))
      << "\n";
  for (std::size_t k = 0; k < r.witnesses.size(); ++k) {
    out << "witness " << k + 1 << ":\n";
    for (const auto& a : r.witnesses[k].actions) out << "  " << describe(a) << "\n";
  }
  return kExitOk;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  const ScenarioFile f = load(o, o.scenario, o.params);
  const std::size_t bound = o.bound == 0 ? 40 : o.bound;
  const auto all = enumerate_interleavings(f.instance.initial, f.instance.plans, bound, horizon_of(o, f.instance));
  if (o.format == "json") {
    out << Json{{"scenario", f.instance.name}, {"count", all.size()}, {"progressions", all}}.dump(2) << "\n";
    return kExitOk;
  }
  out << f.instance.name << ": " << all.size() << " distinct progression(s)\n";
  for (std::size_t k = 0; k < all.size(); ++k) {
    out << "progression " << k + 1 << " (" << to_string(all[k].status);
    for (const auto& [flag, v] : all[k].choices) out << ", " << flag << "=" << v;
    out << ")\n";
    if (o.verbose) print_events(out, all[k].events);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic simulation and legality analysis of financial products.\n"
               "Exit codes: 0 ok / Halal / equivalent, 1 runtime error, 2 usage or parameter error,\n"
               "3 Haram, 4 Undecided, 5 not equivalent."};
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv("RPSF_SEED")) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: RPSF_SEED must be an unsigned integer\n";
      return kExitUsage;
    }
  }

  const auto common = [&](CLI::App* c, bool scenario) {
    if (scenario) c->add_option("scenario", o.scenario, "built-in scenario name");
    c->add_option("--param", o.params, "parameter override key=value (exact quantity)");
    c->add_option("--scenario-file", o.scenario_file, "scenario file in rpsf-scenario/1 JSON format");
    c->add_option("--strategy", o.strategy, "round-robin, seeded or exhaustive");
    c->add_option("--seed", o.seed, "seed for the seeded strategy (default from RPSF_SEED)");
    c->add_option("--horizon", o.horizon, "last day the clock may reach");
    c->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    c->add_flag("-v,--verbose", o.verbose, "print the event log");
  };

  auto* list = app.add_subcommand("list-scenarios", "list built-in scenarios and their parameters");
  list->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  auto* runc = app.add_subcommand("run", "run a scenario and print its progression");
  common(runc, true);
  auto* judgec = app.add_subcommand("judge", "judge a scenario under a legal position");
  common(judgec, true);
  judgec->add_option("--position", o.position, "CONVENTIONAL, STRICT_DESCRIPTIVE, STRICT_FUNCTIONAL, MAJORITY, MALAYSIA");
  auto* comparec = app.add_subcommand("compare", "compare the monetary flows of two scenarios");
  common(comparec, false);
  comparec->add_option("a", o.scenario, "first scenario")->required();
  comparec->add_option("b", o.scenario_b, "second scenario")->required();
  comparec->add_option("--param-a", o.params_a, "parameter of the first scenario");
  comparec->add_option("--param-b", o.params_b, "parameter of the second scenario");
  comparec->add_option("--perspective", o.perspective, "comma-separated agents, or all");
  auto* synthc = app.add_subcommand("synthesize", "search primitive sequences reproducing a target");
  common(synthc, true);
  synthc->add_option("--bound", o.bound, "maximum number of primitives (default 6)");
  synthc->add_option("--perspective", o.perspective, "comma-separated agents, or all");
  synthc->add_option("--catalogue", o.catalogue, "comma-separated primitives (default all)");
  auto* enumc = app.add_subcommand("enumerate", "enumerate all interleavings of a scenario");
  common(enumc, true);
  enumc->add_option("--bound", o.bound, "maximum number of plan actions (default 40)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (list->parsed()) return cmd_list(o, out);
    if (runc->parsed()) return cmd_run(o, out);
    if (judgec->parsed()) return cmd_judge(o, out);
    if (comparec->parsed()) return cmd_compare(o, out);
    if (synthc->parsed()) return cmd_synthesize(o, out);
    if (enumc->parsed()) return cmd_enumerate(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool usage = e.code() == ErrorCode::ParameterViolation || e.code() == ErrorCode::UnknownScenario;
    return usage ? kExitUsage : kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rpsf
