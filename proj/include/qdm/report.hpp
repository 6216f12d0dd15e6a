#pragma once

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qdm/analysis.hpp"
#include "qdm/argumentation.hpp"
#include "qdm/model.hpp"
#include "qdm/semantics.hpp"

namespace qdm::report {

using ordered_json = nlohmann::ordered_json;

inline std::string_view polarity_name(Polarity p) {
  return p == Polarity::Positive ? "positive" : "negative";
}

inline std::string sign_text(int v) {
  return v > 0 ? "+1" : v < 0 ? "-1" : "0";
}

inline std::string join_names(const DecisionModel& m,
                              const std::vector<VarId>& vars) {
  std::string out;
  for (VarId v : vars) {
    if (!out.empty()) out += " ";
    out += m.name(v);
  }
  return out;
}

inline ordered_json names_json(const DecisionModel& m,
                               const std::vector<VarId>& vars) {
  ordered_json arr = ordered_json::array();
  for (VarId v : vars) arr.push_back(m.name(v));
  return arr;
}

inline ordered_json kappa_json_value(KappaValue k) {
  if (k.is_infinite()) return "inf";
  return k.finite();
}

inline std::string rule_text(const DecisionModel& m, const ActionRule& r) {
  std::string out = m.name(r.action);
  for (Literal l : r.body) out += " & " + m.literal_name(l);
  out += " => " + m.literal_name(r.head);
  if (r.priority != 0) out += " [" + std::to_string(r.priority) + "]";
  return out;
}

inline std::string number_text(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

// ---------------------------------------------------------------------------
// decide

struct DecideResult {
  std::string method;  // reasons | semantics | both
  std::optional<std::vector<VarId>> reasons;
  std::optional<std::vector<VarId>> semantics;
  bool agree = true;
};

inline const std::vector<VarId>& decide_best(const DecideResult& r) {
  return r.reasons ? *r.reasons : *r.semantics;
}

inline std::string decide_text(const DecisionModel& m, const DecideResult& r) {
  std::ostringstream out;
  if (r.reasons) out << "reasons:   " << join_names(m, *r.reasons) << "\n";
  if (r.semantics) out << "semantics: " << join_names(m, *r.semantics) << "\n";
  if (r.agree)
    out << "best: " << join_names(m, decide_best(r)) << "\n";
  else
    out << "disagreement: reasons and semantics differ\n";
  return out.str();
}

inline ordered_json decide_json(const DecisionModel& m, const DecideResult& r) {
  ordered_json doc;
  doc["schema"] = "qdm.decide/1";
  doc["method"] = r.method;
  if (r.reasons) doc["reasons"] = names_json(m, *r.reasons);
  if (r.semantics) doc["semantics"] = names_json(m, *r.semantics);
  doc["agree"] = r.agree;
  if (r.agree) doc["best"] = names_json(m, decide_best(r));
  return doc;
}

// ---------------------------------------------------------------------------
// explain

inline std::string explain_text(const DecisionModel& m) {
  std::ostringstream out;
  if (m.goals().empty()) {
    out << "no goals declared; do-nothing is optimal by default\n";
    return out.str();
  }
  StrengthTable t(m);
  if (!m.rules().empty()) {
    out << "rules:\n";
    for (std::size_t i = 0; i < m.rules().size(); ++i)
      out << "  " << (i + 1) << ": " << rule_text(m, m.rules()[i]) << "\n";
  }
  for (VarId a : m.actions()) {
    out << "action " << m.name(a) << ":\n";
    for (std::size_t g = 0; g < m.goals().size(); ++g) {
      const Goal& goal = m.goals()[g];
      const ReasonRecord& rec = t.record(g, a);
      std::string lname = m.literal_name(goal.literal);
      out << "  " << lname << ": ";
      if (rec.strength == ReasonStrength::Empty)
        out << "no reason regarding " << m.name(a);
      else
        out << to_string(rec.strength) << " reason "
            << (goal.polarity == Polarity::Positive ? "FOR" : "AGAINST") << " "
            << m.name(a);
      out << " (" << polarity_name(goal.polarity) << ", priority "
          << goal.priority;
      if (!rec.supporting.empty()) {
        out << "; rules:";
        for (std::size_t ri : rec.supporting) out << " " << (ri + 1);
      }
      if (!rec.opposing.empty()) {
        out << "; conflicting rules:";
        for (std::size_t ri : rec.opposing) out << " " << (ri + 1);
      }
      out << ")\n";
    }
  }
  std::vector<VarId> best = best_actions(t);
  out << "best: " << join_names(m, best) << "\n";
  if (auto sel = select_linear(t)) {
    out << "selection:\n";
    std::optional<std::size_t> decisive;
    for (const SelectStep& s : sel->steps) {
      out << "  level " << s.priority << " ("
          << m.literal_name(m.goals()[s.goal].literal) << "): ";
      if (s.eliminated.empty()) {
        out << "no eliminations\n";
      } else {
        out << "eliminated " << join_names(m, s.eliminated) << "\n";
        decisive = s.goal;
      }
    }
    if (decisive)
      out << "decisive goal: " << m.literal_name(m.goals()[*decisive].literal)
          << "\n";
  } else {
    out << "comparisons:\n";
    for (VarId x : m.actions()) {
      if (std::find(best.begin(), best.end(), x) != best.end()) continue;
      for (VarId a : m.actions()) {
        if (a == x || !better(t, a, x)) continue;
        auto g = deciding_goal(t, a, x);
        out << "  " << m.name(a) << " beats " << m.name(x);
        if (g) out << " (goal " << m.literal_name(m.goals()[*g].literal) << ")";
        out << "\n";
        break;
      }
    }
  }
  return out.str();
}

inline ordered_json explain_json(const DecisionModel& m) {
  ordered_json doc;
  doc["schema"] = "qdm.explain/1";
  if (m.goals().empty()) {
    doc["message"] = "no goals declared; do-nothing is optimal by default";
    doc["best"] = names_json(m, best_actions(m));
    return doc;
  }
  StrengthTable t(m);
  ordered_json rules = ordered_json::array();
  for (const ActionRule& r : m.rules()) rules.push_back(rule_text(m, r));
  doc["rules"] = rules;
  ordered_json actions = ordered_json::array();
  for (VarId a : m.actions()) {
    ordered_json entry;
    entry["action"] = m.name(a);
    ordered_json goals = ordered_json::array();
    for (std::size_t g = 0; g < m.goals().size(); ++g) {
      const Goal& goal = m.goals()[g];
      const ReasonRecord& rec = t.record(g, a);
      ordered_json row;
      row["goal"] = m.literal_name(goal.literal);
      row["polarity"] = polarity_name(goal.polarity);
      row["priority"] = goal.priority;
      row["strength"] = std::string(to_string(rec.strength));
      if (rec.strength == ReasonStrength::Empty)
        row["direction"] = nullptr;
      else
        row["direction"] =
            goal.polarity == Polarity::Positive ? "for" : "against";
      ordered_json sup = ordered_json::array();
      for (std::size_t ri : rec.supporting) sup.push_back(ri + 1);
      ordered_json opp = ordered_json::array();
      for (std::size_t ri : rec.opposing) opp.push_back(ri + 1);
      row["supporting_rules"] = sup;
      row["opposing_rules"] = opp;
      goals.push_back(std::move(row));
    }
    entry["goals"] = std::move(goals);
    actions.push_back(std::move(entry));
  }
  doc["actions"] = std::move(actions);
  std::vector<VarId> best = best_actions(t);
  doc["best"] = names_json(m, best);
  ordered_json selection;
  if (auto sel = select_linear(t)) {
    selection["mode"] = "linear";
    ordered_json steps = ordered_json::array();
    std::optional<std::size_t> decisive;
    for (const SelectStep& s : sel->steps) {
      ordered_json step;
      step["priority"] = s.priority;
      step["goal"] = m.literal_name(m.goals()[s.goal].literal);
      step["eliminated"] = names_json(m, s.eliminated);
      if (!s.eliminated.empty()) decisive = s.goal;
      steps.push_back(std::move(step));
    }
    selection["steps"] = std::move(steps);
    if (decisive)
      selection["decisive_goal"] =
          m.literal_name(m.goals()[*decisive].literal);
    else
      selection["decisive_goal"] = nullptr;
  } else {
    selection["mode"] = "pairwise";
    ordered_json comparisons = ordered_json::array();
    for (VarId x : m.actions()) {
      if (std::find(best.begin(), best.end(), x) != best.end()) continue;
      for (VarId a : m.actions()) {
        if (a == x || !better(t, a, x)) continue;
        ordered_json cmp;
        cmp["winner"] = m.name(a);
        cmp["loser"] = m.name(x);
        auto g = deciding_goal(t, a, x);
        if (g)
          cmp["goal"] = m.literal_name(m.goals()[*g].literal);
        else
          cmp["goal"] = nullptr;
        comparisons.push_back(std::move(cmp));
        break;
      }
    }
    selection["comparisons"] = std::move(comparisons);
  }
  doc["selection"] = std::move(selection);
  return doc;
}

// ---------------------------------------------------------------------------
// kappa

namespace detail {

// Goal literals ranked zero given the action and state, in goal declaration
// order: the outcomes the action leaves fully plausible there.
inline std::vector<std::string> zero_conditionals(const DecisionModel& m,
                                                  VarId action,
                                                  const InputState& s) {
  std::vector<std::string> lits;
  for (const Goal& g : m.goals()) {
    if (kappa_conditional(m, action, g.literal, s) == KappaValue(0))
      lits.push_back(m.literal_name(g.literal));
    if (kappa_conditional(m, action, g.literal.complement(), s) ==
        KappaValue(0))
      lits.push_back(m.literal_name(g.literal.complement()));
  }
  return lits;
}

}  // namespace detail

inline std::string kappa_text(const DecisionModel& m,
                              std::uint32_t cap = kDefaultStateCap) {
  std::ostringstream out;
  SemanticsTable t(m, cap);
  out << "observation kappa: " << kappa_observation(m, cap).to_string() << "\n";
  const auto& states = t.states();
  for (std::size_t si = 0; si < states.size(); ++si)
    out << "state " << state_label(m, states[si]) << ": prior "
        << kappa_prior(m, states[si]).to_string() << ", posterior "
        << t.posterior(si).to_string() << "\n";
  for (VarId a : m.actions()) {
    out << "action " << m.name(a) << ":\n";
    for (const InputState& s : states) {
      out << "  zero-conditional at " << state_label(m, s) << ":";
      for (const std::string& lit : detail::zero_conditionals(m, a, s))
        out << " " << lit;
      out << "\n";
    }
    for (std::size_t g = 0; g < m.goals().size(); ++g) {
      Literal lit = m.goals()[g].literal;
      out << "  kappa(" << m.literal_name(lit) << ") = "
          << t.kappa(a, g).to_string() << ", kappa("
          << m.literal_name(lit.complement()) << ") = "
          << t.kappa(a, g, true).to_string() << ", belief "
          << sign_text(t.belief(a, g)) << ", rank " << sign_text(t.rank(a, g))
          << "\n";
    }
    out << "  rank vector: " << to_string(rank_vector(t, a)) << "\n";
  }
  return out.str();
}

inline ordered_json kappa_json(const DecisionModel& m,
                               std::uint32_t cap = kDefaultStateCap) {
  ordered_json doc;
  doc["schema"] = "qdm.kappa/1";
  SemanticsTable t(m, cap);
  doc["observation_kappa"] = kappa_json_value(kappa_observation(m, cap));
  ordered_json states = ordered_json::array();
  for (std::size_t si = 0; si < t.states().size(); ++si) {
    ordered_json row;
    row["state"] = state_label(m, t.states()[si]);
    row["prior"] = kappa_json_value(kappa_prior(m, t.states()[si]));
    row["posterior"] = kappa_json_value(t.posterior(si));
    states.push_back(std::move(row));
  }
  doc["states"] = std::move(states);
  ordered_json actions = ordered_json::array();
  for (VarId a : m.actions()) {
    ordered_json entry;
    entry["action"] = m.name(a);
    ordered_json zeros = ordered_json::array();
    for (const InputState& s : t.states()) {
      ordered_json row;
      row["state"] = state_label(m, s);
      row["literals"] = detail::zero_conditionals(m, a, s);
      zeros.push_back(std::move(row));
    }
    entry["zero_conditionals"] = std::move(zeros);
    ordered_json goals = ordered_json::array();
    for (std::size_t g = 0; g < m.goals().size(); ++g) {
      ordered_json row;
      row["goal"] = m.literal_name(m.goals()[g].literal);
      row["kappa"] = kappa_json_value(t.kappa(a, g));
      row["kappa_complement"] = kappa_json_value(t.kappa(a, g, true));
      row["belief"] = t.belief(a, g);
      row["rank"] = t.rank(a, g);
      goals.push_back(std::move(row));
    }
    entry["goals"] = std::move(goals);
    entry["rank_vector"] = to_string(rank_vector(t, a));
    actions.push_back(std::move(entry));
  }
  doc["actions"] = std::move(actions);
  return doc;
}

// ---------------------------------------------------------------------------
// check

inline std::string check_text(const DecisionModel& m,
                              const EquivalenceReport& rep) {
  std::ostringstream out;
  out << "model digest: " << rep.digest << "\n";
  out << "positive theory: " << (rep.positive_theory ? "yes" : "no") << "\n";
  out << "reasons:   " << join_names(m, rep.procedure_best) << "\n";
  out << "semantics: " << join_names(m, rep.semantic_optimal) << "\n";
  out << "agree: " << (rep.agree ? "yes" : "no") << "\n";
  if (!rep.traces.empty()) {
    out << "traces:\n";
    for (const ActionTrace& t : rep.traces) {
      out << "  " << m.name(t.action) << ": strengths {";
      for (std::size_t g = 0; g < t.strengths.size(); ++g) {
        if (g) out << ", ";
        out << m.literal_name(m.goals()[g].literal) << ": "
            << to_string(t.strengths[g]);
      }
      out << "}, ranks {";
      for (std::size_t g = 0; g < t.ranks.size(); ++g) {
        if (g) out << ", ";
        out << m.literal_name(m.goals()[g].literal) << ": "
            << sign_text(t.ranks[g]);
      }
      out << "}\n";
    }
  }
  return out.str();
}

inline ordered_json check_json(const DecisionModel& m,
                               const EquivalenceReport& rep) {
  ordered_json doc;
  doc["schema"] = "qdm.check/1";
  doc["digest"] = rep.digest;
  doc["positive_theory"] = rep.positive_theory;
  doc["reasons"] = names_json(m, rep.procedure_best);
  doc["semantics"] = names_json(m, rep.semantic_optimal);
  doc["agree"] = rep.agree;
  if (!rep.traces.empty()) {
    ordered_json traces = ordered_json::array();
    for (const ActionTrace& t : rep.traces) {
      ordered_json row;
      row["action"] = m.name(t.action);
      ordered_json strengths, ranks;
      for (std::size_t g = 0; g < t.strengths.size(); ++g) {
        std::string gname = m.literal_name(m.goals()[g].literal);
        strengths[gname] = std::string(to_string(t.strengths[g]));
        ranks[gname] = t.ranks[g];
      }
      row["strengths"] = std::move(strengths);
      row["ranks"] = std::move(ranks);
      traces.push_back(std::move(row));
    }
    doc["traces"] = std::move(traces);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// fuzz

struct FuzzDisagreement {
  std::uint64_t seed = 0;
  std::string digest;
  std::vector<std::string> reasons;
  std::vector<std::string> semantics;
  std::string model_text;  // canonical serialization, for reproduction
};

struct FuzzOutcome {
  std::uint64_t first_seed = 1;
  std::uint64_t count = 0;
  FuzzLimits limits;
  std::uint64_t agreements = 0;
  std::vector<FuzzDisagreement> disagreements;
};

inline std::string fuzz_text(const FuzzOutcome& f) {
  std::ostringstream out;
  out << "checked " << f.count << " models (seeds " << f.first_seed << ".."
      << (f.first_seed + (f.count ? f.count - 1 : 0)) << "); agreements "
      << f.agreements << ", disagreements " << f.disagreements.size() << "\n";
  for (const FuzzDisagreement& d : f.disagreements) {
    out << "disagreement at seed " << d.seed << " (digest " << d.digest
        << "):\n";
    out << "  reasons:  ";
    for (const auto& n : d.reasons) out << " " << n;
    out << "\n  semantics:";
    for (const auto& n : d.semantics) out << " " << n;
    out << "\n  model:\n";
    std::istringstream lines(d.model_text);
    for (std::string line; std::getline(lines, line);)
      out << "    " << line << "\n";
  }
  return out.str();
}

inline ordered_json limits_json(const FuzzLimits& lim) {
  ordered_json doc;
  doc["max_input_vars"] = lim.max_input_vars;
  doc["max_actions"] = lim.max_actions;
  doc["max_goals"] = lim.max_goals;
  doc["max_rules"] = lim.max_rules;
  doc["priority_span"] = lim.priority_span;
  doc["max_rule_priority"] = lim.max_rule_priority;
  doc["linear_priorities"] = lim.linear_priorities;
  doc["with_observations"] = lim.with_observations;
  doc["allow_conflicting_heads"] = lim.allow_conflicting_heads;
  return doc;
}

inline ordered_json fuzz_json(const FuzzOutcome& f) {
  ordered_json doc;
  doc["schema"] = "qdm.fuzz/1";
  doc["seed"] = f.first_seed;
  doc["count"] = f.count;
  doc["limits"] = limits_json(f.limits);
  doc["agreements"] = f.agreements;
  ordered_json disagreements = ordered_json::array();
  for (const FuzzDisagreement& d : f.disagreements) {
    ordered_json row;
    row["seed"] = d.seed;
    row["digest"] = d.digest;
    row["reasons"] = d.reasons;
    row["semantics"] = d.semantics;
    row["model"] = d.model_text;
    disagreements.push_back(std::move(row));
  }
  doc["disagreements"] = std::move(disagreements);
  return doc;
}

// ---------------------------------------------------------------------------
// sensitivity

inline std::string sensitivity_text(const DecisionModel& m,
                                    const SensitivityReport& rep) {
  std::ostringstream out;
  out << "optimal: " << join_names(m, rep.optimal) << "\n";
  if (rep.perturbations.empty()) {
    out << "no input variables; nothing to perturb\n";
    return out.str();
  }
  out << "perturbations:\n";
  std::vector<VarId> critical_vars;
  for (const Perturbation& p : rep.perturbations) {
    out << "  " << m.name(p.variable) << ": " << to_string(p.from) << " -> "
        << to_string(p.to) << "\n";
    if (!p.changed) {
      out << "    optimal: unchanged\n";
      continue;
    }
    out << "    optimal: " << join_names(m, p.optimal_before) << " -> "
        << join_names(m, p.optimal_after) << "\n";
    for (const FlippedPreference& f : p.flips) {
      const Goal& gb = m.goals()[f.justifying_before];
      const Goal& ga = m.goals()[f.justifying_after];
      out << "    flip: was " << m.name(f.winner_before) << " > "
          << m.name(f.winner_after) << " (justified by "
          << m.literal_name(gb.literal) << ", priority " << gb.priority
          << "); now " << m.name(f.winner_after) << " > "
          << m.name(f.winner_before) << " (justified by "
          << m.literal_name(ga.literal) << ", priority " << ga.priority
          << ")\n";
    }
    out << "    critical: " << (p.critical ? "yes" : "no") << "\n";
    if (p.critical &&
        std::find(critical_vars.begin(), critical_vars.end(), p.variable) ==
            critical_vars.end())
      critical_vars.push_back(p.variable);
  }
  if (critical_vars.empty())
    out << "critical parameters: none\n";
  else
    out << "critical parameters: " << join_names(m, critical_vars) << "\n";
  return out.str();
}

inline ordered_json sensitivity_json(const DecisionModel& m,
                                     const SensitivityReport& rep) {
  ordered_json doc;
  doc["schema"] = "qdm.sensitivity/1";
  doc["optimal"] = names_json(m, rep.optimal);
  ordered_json perturbations = ordered_json::array();
  for (const Perturbation& p : rep.perturbations) {
    ordered_json row;
    row["variable"] = m.name(p.variable);
    row["from"] = std::string(to_string(p.from));
    row["to"] = std::string(to_string(p.to));
    row["optimal_before"] = names_json(m, p.optimal_before);
    row["optimal_after"] = names_json(m, p.optimal_after);
    row["changed"] = p.changed;
    ordered_json flips = ordered_json::array();
    for (const FlippedPreference& f : p.flips) {
      ordered_json flip;
      flip["winner_before"] = m.name(f.winner_before);
      flip["winner_after"] = m.name(f.winner_after);
      const Goal& gb = m.goals()[f.justifying_before];
      const Goal& ga = m.goals()[f.justifying_after];
      flip["justifying_before"] = {
          {"goal", m.literal_name(gb.literal)}, {"priority", gb.priority}};
      flip["justifying_after"] = {
          {"goal", m.literal_name(ga.literal)}, {"priority", ga.priority}};
      flips.push_back(std::move(flip));
    }
    row["flips"] = std::move(flips);
    row["critical"] = p.critical;
    perturbations.push_back(std::move(row));
  }
  doc["perturbations"] = std::move(perturbations);
  doc["any_critical"] = rep.any_critical;
  return doc;
}

// ---------------------------------------------------------------------------
// eu

inline std::string eu_text(const DecisionModel& m, const EuReport& rep) {
  std::ostringstream out;
  out << "config: epsilon " << number_text(rep.config.epsilon) << ", base "
      << number_text(rep.config.base) << ", delta "
      << number_text(rep.config.delta) << "\n";
  for (const EuEntry& e : rep.values)
    out << "EU(" << m.name(e.action) << ") = " << number_text(e.value) << "\n";
  out << "eu optimal: " << join_names(m, rep.eu_optimal) << "\n";
  out << "qualitative optimal: " << join_names(m, rep.qualitative) << "\n";
  out << "agree: " << (rep.agree ? "yes" : "no") << "\n";
  return out.str();
}

inline ordered_json eu_json(const DecisionModel& m, const EuReport& rep) {
  ordered_json doc;
  doc["schema"] = "qdm.eu/1";
  doc["config"] = {{"epsilon", rep.config.epsilon},
                   {"base", rep.config.base},
                   {"delta", rep.config.delta}};
  ordered_json values = ordered_json::array();
  for (const EuEntry& e : rep.values) {
    ordered_json row;
    row["action"] = m.name(e.action);
    row["eu"] = e.value;
    values.push_back(std::move(row));
  }
  doc["values"] = std::move(values);
  doc["eu_optimal"] = names_json(m, rep.eu_optimal);
  doc["qualitative_optimal"] = names_json(m, rep.qualitative);
  doc["agree"] = rep.agree;
  return doc;
}

}  // namespace qdm::report
