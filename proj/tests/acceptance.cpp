// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include "rpsf/flow.hpp"
#include "rpsf/json_io.hpp"
#include "rpsf/legality.hpp"
#include "rpsf/scenarios.hpp"
#include "rpsf/synthesis.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rpsf;

namespace {

using Clock = std::chrono::steady_clock;

// Collects the reasons a criterion failed.
struct Check {
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    if (!(got == want)) {
      std::ostringstream s;
      s << what << ": got " << got << ", want " << want;
      problems.push_back(s.str());
    }
  }
};

int failures = 0;

void criterion(int n, const std::string& title, double limit_seconds, const std::function<void(Check&)>& body) {
  Check c;
  const auto start = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.problems.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    c.problems.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(limit_seconds) + " s");
  }
  const bool ok = c.problems.empty();
  failures += ok ? 0 : 1;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " (" << std::fixed;
  std::cout.precision(3);
  std::cout << secs << " s)\n";
  for (const auto& p : c.problems) std::cout << "    " << p << "\n";
}

Progression run_default(const ScenarioInstance& s) {
  return run(s.initial, s.plans, strategy::RoundRobin{}, s.horizon);
}

Quantity at(const NetPosition& pos, const AgentId& agent, std::int64_t day) {
  auto a = pos.find(agent);
  if (a == pos.end()) return {};
  auto d = a->second.find(Date{day});
  return d == a->second.end() ? Quantity{} : d->second;
}

mpq_class to_mpq(const Quantity& q) {
  mpq_class m(q.to_string(), 10);
  m.canonicalize();
  return m;
}

Quantity from_mpq(const mpq_class& m) { return Quantity::parse(m.get_str(10)); }

// Positive rational with numerator and denominator of up to `digits` digits.
mpq_class random_rational(std::mt19937_64& rng, int digits, bool allow_zero) {
  std::uniform_int_distribution<int> len(1, digits), dig(0, 9);
  auto number = [&](bool nonzero) {
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + dig(rng)));
    if (nonzero && s.find_first_not_of('0') == std::string::npos) s.back() = '3';
    return s;
  };
  mpq_class q(number(!allow_zero) + "/" + number(true), 10);
  q.canonicalize();
  return q;
}

std::size_t brute_force_interleavings(std::vector<std::size_t> remaining) {
  if (std::all_of(remaining.begin(), remaining.end(), [](std::size_t r) { return r == 0; })) return 1;
  std::size_t total = 0;
  for (auto& r : remaining) {
    if (r == 0) continue;
    --r;
    total += brute_force_interleavings(remaining);
    ++r;
  }
  return total;
}

std::size_t multinomial(const std::vector<std::size_t>& lengths) {
  std::size_t n = 0, out = 1;
  for (std::size_t len : lengths) {
    for (std::size_t j = 1; j <= len; ++j) out = out * ++n / j;
  }
  return out;
}

SeqNo activation(const Progression& pr, const ContractId& contract) {
  const std::size_t parties = pr.final_world.contract(contract).parties.size();
  std::size_t seen = 0;
  for (const auto& e : pr.events) {
    if (e.action.kind == ActionKind::SignContract && e.action.contract == contract && ++seen == parties) return e.seq;
  }
  return 0;
}

}  // namespace

int main() {
  criterion(1, "classic tawarruq net positions and round trip", 1.0, [](Check& c) {
    const ScenarioInstance s = instantiate("tawarruq_classic", {{"p", 100}, {"i", 10}, {"t", 365}});
    const Progression pr = run_default(s);
    const NetPosition pos = net_position(monetary_projection(pr));
    c.equal(at(pos, "X", 0), Quantity(-100), "X day 0");
    c.equal(at(pos, "X", 365), Quantity(110), "X day 365");
    c.equal(at(pos, "Y", 0), Quantity(100), "Y day 0");
    c.equal(at(pos, "Y", 365), Quantity(-110), "Y day 365");
    c.equal(net_gain(pos, "Z"), Quantity(0), "Z net");
    c.equal(pos.at("X").size() + pos.at("Y").size(), 4U, "number of dated entries for X and Y");
    for (const auto& [id, g] : s.initial.ground.goods) {
      c.equal(pr.final_world.good(id).owner, g.owner, "final owner of " + id);
    }
  });

  criterion(2, "contractus trinus effective rate is 1/10", 1.0, [](Check& c) {
    const ScenarioInstance s = instantiate("contractus_trinus");
    const NetPosition pos = net_position(monetary_projection(run_default(s)));
    c.require(s.lender && s.principal && s.term, "scenario declares lender, principal and term");
    const Quantity gain = net_gain(pos, *s.lender);
    c.equal(effective_interest_rate(*s.principal, *s.principal + gain, *s.term), Quantity(1, 10), "effective rate");
  });

  criterion(3, "savings repayment p - c + q*p over 100 random triples", 0, [](Check& c) {
    std::mt19937_64 rng(20260815);
    int checked = 0;
    while (checked < 100) {
      const mpq_class p = random_rational(rng, 12, false);
      const mpq_class c_ = random_rational(rng, 8, true);
      const mpq_class q = random_rational(rng, 4, true) / 7;
      const mpq_class want = p - c_ + q * p;
      if (sgn(want) <= 0) continue;  // the scenario rejects non-positive repayments
      const ScenarioInstance s = instantiate(
          "savings_account_with_interest", {{"p", from_mpq(p)}, {"c", from_mpq(c_)}, {"q", from_mpq(q)}, {"t", 365}});
      const NetPosition pos = net_position(monetary_projection(run_default(s)));
      const mpq_class got = to_mpq(at(pos, "X", 365));
      if (got != want) {
        c.require(false, "p=" + p.get_str() + " c=" + c_.get_str() + " q=" + q.get_str() + ": got " + got.get_str() +
                             ", oracle " + want.get_str());
      }
      ++checked;
    }
  });

  criterion(4, "legality matrix, ten verdicts", 1.0, [](Check& c) {
    struct Row {
      const char* position;
      const char* scenario;
      Params params;
      Verdict want;
    };
    const std::vector<Row> rows = {
        {"STRICT_DESCRIPTIVE", "savings_account_with_interest", {}, Verdict::Haram},
        {"STRICT_DESCRIPTIVE", "tawarruq_pi_double_prime", {}, Verdict::Halal},
        {"STRICT_FUNCTIONAL", "savings_account_with_interest", {}, Verdict::Haram},
        {"STRICT_FUNCTIONAL", "tawarruq_pi_double_prime", {}, Verdict::Haram},
        {"MAJORITY", "ina_two_party", {}, Verdict::Haram},
        {"MAJORITY", "tawarruq_classic", {}, Verdict::Halal},
        {"MALAYSIA", "ina_two_party", {{"single_contract", 0}}, Verdict::Halal},
        {"MALAYSIA", "ina_two_party", {{"single_contract", 1}}, Verdict::Haram},
    };
    for (const auto& r : rows) {
      const ScenarioInstance s = instantiate(r.scenario, r.params);
      const Judgement j = judge(*find_position(r.position), s, run_default(s));
      c.equal(to_string(j.verdict), to_string(r.want), std::string(r.position) + " on " + r.scenario);
      if (r.position == std::string("STRICT_DESCRIPTIVE") && r.want == Verdict::Haram) {
        c.require(!j.reasons.empty() && j.reasons[0].rule == "riba", "savings account condemned for riba");
      }
    }
    for (const auto& spec : catalogue()) {
      const ScenarioInstance s = instantiate(spec.name);
      const Judgement j = judge(*find_position("CONVENTIONAL"), s, run_default(s));
      c.equal(to_string(j.verdict), to_string(Verdict::Halal), "CONVENTIONAL on " + spec.name);
    }
  });

  criterion(5, "pi_prime equals the savings account for X only", 1.0, [](Check& c) {
    const ScenarioInstance pi = instantiate("tawarruq_pi_prime");
    const ScenarioInstance sa = instantiate("savings_account_with_interest");
    const FlowTrace a = monetary_projection(run_default(pi));
    const FlowTrace b = monetary_projection(run_default(sa));
    c.require(equivalent(a, b, Perspective{{"X"}}), "equivalent from X");
    c.require(!equivalent(a, b, Perspective::everyone()), "not equivalent from all agents");
  });

  criterion(6, "synthesis of the savings account at bound 6", 60.0, [](Check& c) {
    const ScenarioInstance sa = instantiate("savings_account_with_interest");
    const FlowTrace target = monetary_projection(run_default(sa));
    const SynthesisResult full = synthesize(target, SynthesisConfig{all_primitives(), 6, Perspective{{"X"}}});
    c.require(full.found && !full.witnesses.empty(), "full catalogue finds a witness");
    std::size_t without_credit = 0;
    for (const auto& w : full.witnesses) {
      const bool credit = std::any_of(w.actions.begin(), w.actions.end(),
                                      [](const Action& a) { return a.kind == ActionKind::BuyOnCredit; });
      without_credit += credit ? 0 : 1;
      if (!equivalent(monetary_projection(w.progression), target, Perspective{{"X"}})) {
        c.require(false, "a witness does not reproduce the target");
        break;
      }
    }
    c.equal(without_credit, 0U, "witnesses without a credit sale");
    const SynthesisResult spot = synthesize(target, SynthesisConfig{{Primitive::SpotSale}, 6, Perspective{{"X"}}});
    c.require(!spot.found && spot.witnesses.empty(), "spot sales alone find nothing");
    std::cout << "    " << full.witnesses.size() << " witnesses, " << full.explored << " sequences explored; spot only "
              << spot.explored << " explored\n";
  });

  criterion(7, "engine: interleaving counts, fairness, replay, signing order", 0, [](Check& c) {
    const std::vector<std::vector<std::size_t>> shapes = {{2, 2}, {1, 1, 1}, {3, 2}, {2, 2, 2}, {4, 4}, {3, 3, 2},
                                                          {1, 2, 3, 2}, {8}, {5, 3}, {2, 2, 2, 2}};
    for (const auto& shape : shapes) {
      WorldState w;
      add_agent(w, "S", Role::Company);
      std::vector<Plan> plans;
      for (std::size_t k = 0; k < shape.size(); ++k) {
        const AgentId id = "A" + std::to_string(k);
        add_agent(w, id, Role::Person, 1000);
        Plan p{id, {}};
        for (std::size_t j = 0; j < shape[k]; ++j) {
          Action a;
          a.kind = ActionKind::Pay;
          a.actor = id;
          a.counterparty = "S";
          a.sum = static_cast<std::int64_t>(10 * k + j + 1);
          p.steps.push_back(do_(a));
        }
        plans.push_back(p);
      }
      const std::size_t got = enumerate_interleavings(w, plans, 8).size();
      c.equal(got, brute_force_interleavings(shape), "interleavings vs brute force");
      c.equal(got, multinomial(shape), "interleavings vs multinomial");
    }
    for (const auto& spec : catalogue()) {
      const ScenarioInstance s = instantiate(spec.name);
      const Progression a = run_default(s);
      c.require(round_robin_fair(a), "round robin fairness on " + spec.name);
      const Progression b = run_default(s);
      c.require(Json(a).dump() == Json(b).dump(), "repeated run differs on " + spec.name);
      const WorldState r = replay(s.initial, a.events, a.final_world.now);
      c.require(Json(r).dump() == Json(a.final_world).dump(), "replay differs on " + spec.name);
    }
    const ScenarioInstance t = instantiate("tawarruq_pi_triple_prime");
    const auto all = enumerate_interleavings(t.initial, t.plans, 32, t.horizon);
    c.require(!all.empty(), "triple-prime enumeration is empty");
    for (const auto& pr : all) {
      const SeqNo c1 = activation(pr, "C1"), c2 = activation(pr, "C2"), c3 = activation(pr, "C3");
      if (!(c3 > 0 && c3 < c2 && c2 < c1)) {
        c.require(false, "signing order broken in trace " + trace_key(pr.events));
        break;
      }
    }
    std::cout << "    " << all.size() << " triple-prime traces checked\n";
  });

  criterion(8, "meadow laws over 1000 random rationals", 0, [](Check& c) {
    std::mt19937_64 rng(8);
    auto sample = [&] {
      mpq_class m = random_rational(rng, 20, true);
      if (rng() % 2) m = -m;
      if (rng() % 10 == 0) m = 0;
      return from_mpq(m);
    };
    const Quantity zero, one(1);
    for (int n = 0; n < 1000; ++n) {
      const Quantity x = sample(), y = sample(), z = sample();
      c.require((x + y) + z == x + (y + z), "additive associativity");
      c.require(x + y == y + x, "additive commutativity");
      c.require(x + zero == x && x + (-x) == zero, "additive identity and inverse");
      c.require((x * y) * z == x * (y * z), "multiplicative associativity");
      c.require(x * y == y * x && x * one == x, "multiplicative commutativity and identity");
      c.require(x * (y + z) == x * y + x * z, "distributivity");
      c.require(inverse(inverse(x)) == x, "inverse is an involution");
      c.require(x * inverse(x) * x == x, "x * inverse(x) * x = x");
      c.require(total_div(x, zero) == zero, "division by zero is zero");
      c.require(total_div(x, y) == x * inverse(y), "division is multiplication by the inverse");
      c.require(to_mpq(x * y) == to_mpq(x) * to_mpq(y) && to_mpq(x + y) == to_mpq(x) + to_mpq(y), "oracle agrees");
      if (c.problems.size() > 5) break;
    }
    c.equal(inverse(zero), zero, "inverse(0)");
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures;
}
