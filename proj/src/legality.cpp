#include "rpsf/legality.hpp"

#include "rpsf/flow.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace rpsf {

namespace {

const HistoryLog& history_of(const Progression& prog) {
  return prog.final_world.history.empty() ? prog.events : prog.final_world.history;
}

bool is_sale(const Action& a) { return a.kind == ActionKind::SpotSale || a.kind == ActionKind::BuyOnCredit; }

// Contracts a sale was performed under. The payment contract a credit sale
// creates does not count.
std::set<ContractId> sale_sources(const Action& a) {
  std::set<ContractId> out(a.reason.contracts.begin(), a.reason.contracts.end());
  if (a.kind == ActionKind::SpotSale && !a.contract.empty()) out.insert(a.contract);
  return out;
}

std::vector<Finding> tag_findings(const std::string& rule, EthicalTag tag, const HistoryLog& history) {
  Finding f{rule, {}, {}, std::string("actions tagged ") + std::string(to_string(tag))};
  for (const auto& ev : history) {
    if (!ev.action.tags.count(tag)) continue;
    f.events.push_back(ev.seq);
    if (!ev.action.contract.empty() && is_promise(ev.action.kind)) f.contracts.push_back(ev.action.contract);
  }
  if (f.events.empty()) return {};
  return {f};
}

std::vector<Finding> run_detector(const Rule& rule, const WorldState& initial, const Progression& prog) {
  const HistoryLog& history = history_of(prog);
  std::vector<Finding> out;
  switch (rule.detector) {
    case Detector::Riba:
      for (const auto& r : detect_riba(prog.final_world.contracts, history)) {
        out.push_back(Finding{rule.name,
                              {r.out_seq, r.back_seq},
                              {r.link},
                              r.lender + " lends " + r.principal.to_string() + " to " + r.borrower + " and receives " +
                                  r.repayment.to_string() + " after " + std::to_string(r.duration.days) + " days"});
      }
      break;
    case Detector::InaAny:
    case Detector::InaSingleContract:
      for (const auto& f : detect_ina(history)) {
        if (rule.detector == Detector::InaSingleContract && !f.single_contract) continue;
        out.push_back(Finding{rule.name,
                              {f.first_seq, f.second_seq},
                              {},
                              f.good + " sold by " + f.seller + " to " + f.buyer + " and back" +
                                  (f.single_contract ? " under one contract" : "")});
      }
      break;
    case Detector::ContingentOnChance:
      return tag_findings(rule.name, EthicalTag::ContingentOnChance, history);
    case Detector::UndisclosedInformation:
      return tag_findings(rule.name, EthicalTag::UndisclosedInformation, history);
    case Detector::Coercion:
      return tag_findings(rule.name, EthicalTag::Coercion, history);
    case Detector::UnvaluedGoods: {
      Finding f{rule.name, {}, {}, "goods traded without a known market value"};
      for (const auto& ev : history) {
        if (!is_sale(ev.action)) continue;
        const auto& goods = prog.final_world.ground.goods;
        auto it = goods.find(ev.action.good);
        if (it != goods.end() && !it->second.market_value) f.events.push_back(ev.seq);
      }
      if (!f.events.empty()) out.push_back(f);
      break;
    }
    case Detector::FunctionalLoan:
      for (const auto& l : detect_loan_profile(initial, prog)) {
        Finding f{rule.name, {}, {},
                  l.lender + " pays " + l.paid.to_string() + " and later receives " + l.received.to_string()};
        for (const auto& ev : history) {
          const Action& a = ev.action;
          const bool moves_cash = a.kind == ActionKind::Pay || a.kind == ActionKind::SpotSale ||
                                  (a.kind == ActionKind::BuyOnCredit && a.upfront && a.upfront->sign() > 0);
          if (moves_cash && (a.actor == l.lender || a.counterparty == l.lender)) f.events.push_back(ev.seq);
        }
        out.push_back(std::move(f));
      }
      break;
  }
  return out;
}

Rule rule(std::string name, Detector d, Verdict v = Verdict::Haram) { return Rule{std::move(name), d, v}; }

}  // namespace

const std::vector<LegalPosition>& builtin_positions() {
  static const std::vector<LegalPosition> all = [] {
    const std::vector<Rule> descriptive = {
        rule("riba", Detector::Riba),
        rule("gharar", Detector::ContingentOnChance),
        rule("undisclosed_information", Detector::UndisclosedInformation),
        rule("coercion", Detector::Coercion),
        rule("unvalued_goods", Detector::UnvaluedGoods, Verdict::Undecided),
    };
    std::vector<LegalPosition> v;
    v.push_back(LegalPosition{"CONVENTIONAL", PositionMode::Descriptive, {}, Verdict::Halal});
    v.push_back(LegalPosition{"STRICT_DESCRIPTIVE", PositionMode::Descriptive, descriptive, Verdict::Halal});
    v.push_back(LegalPosition{"STRICT_FUNCTIONAL",
                              PositionMode::Functional,
                              {rule("functional_loan", Detector::FunctionalLoan),
                               rule("unvalued_goods", Detector::UnvaluedGoods, Verdict::Undecided)},
                              Verdict::Halal});
    std::vector<Rule> majority = descriptive;
    majority.insert(majority.end() - 1, rule("ina", Detector::InaAny));
    v.push_back(LegalPosition{"MAJORITY", PositionMode::Descriptive, majority, Verdict::Halal});
    std::vector<Rule> malaysia = descriptive;
    malaysia.insert(malaysia.end() - 1, rule("ina_single_contract", Detector::InaSingleContract));
    v.push_back(LegalPosition{"MALAYSIA", PositionMode::Descriptive, malaysia, Verdict::Halal});
    return v;
  }();
  return all;
}

const LegalPosition* find_position(std::string_view name) {
  for (const auto& p : builtin_positions()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::vector<RibaFinding> detect_riba(const std::map<ContractId, ContractRecord>& contracts,
                                     const HistoryLog& history) {
  std::vector<RibaFinding> out;
  for (const auto& [id, c] : contracts) {
    if (!c.interest || c.interest->rate.sign() <= 0) continue;
    std::vector<const Event*> pays;
    for (const auto& ev : history) {
      if (ev.action.kind == ActionKind::Pay && cites(ev, id)) pays.push_back(&ev);
    }
    std::set<SeqNo> used;
    for (std::size_t a = 0; a < pays.size(); ++a) {
      const Action& out_pay = pays[a]->action;
      for (std::size_t b = a + 1; b < pays.size(); ++b) {
        const Action& back = pays[b]->action;
        if (used.count(pays[b]->seq)) continue;
        if (back.actor != out_pay.counterparty || back.counterparty != out_pay.actor) continue;
        if (back.sum > out_pay.sum) {
          out.push_back(RibaFinding{out_pay.actor, out_pay.counterparty, out_pay.sum, back.sum, id,
                                    pays[b]->date - pays[a]->date, pays[a]->seq, pays[b]->seq});
          used.insert(pays[b]->seq);
        }
        break;
      }
    }
  }
  return out;
}

std::vector<InaFinding> detect_ina(const HistoryLog& history) {
  std::vector<InaFinding> out;
  std::map<GoodId, const Event*> last_sale;
  for (const auto& ev : history) {
    if (!is_sale(ev.action)) continue;
    const Action& a = ev.action;
    auto it = last_sale.find(a.good);
    if (it != last_sale.end()) {
      const Action& prev = it->second->action;
      if (prev.seller() == a.buyer() && prev.buyer() == a.seller()) {
        const auto s1 = sale_sources(prev);
        const auto s2 = sale_sources(a);
        const bool shared = std::any_of(s1.begin(), s1.end(), [&](const ContractId& c) { return s2.count(c); });
        out.push_back(InaFinding{a.good, prev.seller(), prev.buyer(), shared, it->second->seq, ev.seq});
      }
    }
    last_sale[a.good] = &ev;
  }
  return out;
}

std::vector<LoanProfileFinding> detect_loan_profile(const WorldState& initial, const Progression& prog) {
  const auto& goods = prog.final_world.ground.goods;
  std::map<GoodId, AgentId> creator;
  std::map<AgentId, std::set<GoodId>> traded;
  for (const auto& ev : history_of(prog)) {
    const Action& a = ev.action;
    if (a.kind == ActionKind::PrepareGood && a.good_spec) creator.emplace(a.good_spec->id, a.actor);
    if (a.kind == ActionKind::SpotSale || a.kind == ActionKind::BuyOnCredit) {
      traded[a.buyer()].insert(a.good);
      traded[a.seller()].insert(a.good);
    }
  }
  auto round_trip = [&](const GoodId& id) {
    const Good& g = goods.at(id);
    auto was = initial.ground.goods.find(id);
    const AgentId start = was != initial.ground.goods.end() ? was->second.owner
                          : creator.count(id)               ? creator.at(id)
                                                            : g.owner;
    return g.owner == start;
  };

  // A lender profile needs cash out before cash in, a gain, and every good the
  // agent traded back with its first owner, so no good was really bought.
  std::vector<LoanProfileFinding> out;
  const NetPosition pos = net_position(monetary_projection(prog));
  for (const auto& [agent, days] : pos) {
    std::optional<Date> last_out, first_in;
    Quantity paid, received;
    for (const auto& [d, q] : days) {
      if (q.sign() < 0) {
        last_out = d;
        paid -= q;
      } else {
        if (!first_in) first_in = d;
        received += q;
      }
    }
    if (!last_out || !first_in || !(*last_out < *first_in)) continue;
    if (received <= paid) continue;
    const auto& mine = traded[agent];
    if (!std::all_of(mine.begin(), mine.end(), round_trip)) continue;
    out.push_back(LoanProfileFinding{agent, paid, received, days.begin()->first, days.rbegin()->first});
  }
  return out;
}

Judgement judge(const LegalPosition& position, const WorldState& initial, const Progression& prog) {
  for (const auto& r : position.rules) {
    auto findings = run_detector(r, initial, prog);
    if (findings.empty()) continue;
    return Judgement{r.verdict, std::move(findings)};
  }
  Judgement j{position.default_verdict, {}};
  if (j.verdict != Verdict::Halal) {
    j.reasons.push_back(Finding{"default", {}, {}, "default verdict of " + position.name});
  }
  return j;
}

Judgement judge(const LegalPosition& position, const ScenarioInstance& instance, const Progression& prog) {
  return judge(position, instance.initial, prog);
}

Quantity effective_interest_rate(const Quantity& principal, const Quantity& repayment, Duration t) {
  if (principal.sign() <= 0) {
    throw Error(ErrorCode::NonpositivePrincipal, "principal " + principal.to_string() + " is not positive");
  }
  if (t.days <= 0) throw Error(ErrorCode::ZeroDuration, "duration must be positive");
  return (repayment - principal) / principal * Quantity(365, t.days);
}

namespace {
constexpr std::array<std::pair<Detector, std::string_view>, 8> kDetectors{{
    {Detector::Riba, "riba"},
    {Detector::InaAny, "ina_any"},
    {Detector::InaSingleContract, "ina_single_contract"},
    {Detector::ContingentOnChance, "contingent_on_chance"},
    {Detector::UndisclosedInformation, "undisclosed_information"},
    {Detector::Coercion, "coercion"},
    {Detector::UnvaluedGoods, "unvalued_goods"},
    {Detector::FunctionalLoan, "functional_loan"},
}};
}  // namespace

std::string_view to_string(Detector d) {
  for (const auto& [k, s] : kDetectors) {
    if (k == d) return s;
  }
  return "?";
}

std::optional<Detector> detector_from_string(std::string_view s) {
  for (const auto& [k, n] : kDetectors) {
    if (n == s) return k;
  }
  return std::nullopt;
}

std::string_view to_string(PositionMode m) { return m == PositionMode::Descriptive ? "descriptive" : "functional"; }

std::optional<PositionMode> position_mode_from_string(std::string_view s) {
  if (s == "descriptive") return PositionMode::Descriptive;
  if (s == "functional") return PositionMode::Functional;
  return std::nullopt;
}

}  // namespace rpsf
