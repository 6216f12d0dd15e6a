#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdm/argumentation.hpp"
#include "qdm/model.hpp"
#include "qdm/parser.hpp"
#include "qdm/semantics.hpp"

namespace qdm {

// True when no rule body mentions a negated input literal.  This is the
// regime where the reasons procedure and the ranking semantics provably pick
// the same actions.
inline bool is_positive_theory(const DecisionModel& m) {
  for (const ActionRule& r : m.rules())
    for (Literal l : r.body)
      if (l.negated) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Cross-checking the two decision procedures against each other.

struct ActionTrace {
  VarId action = 0;
  std::vector<ReasonStrength> strengths;  // per goal, declaration order
  std::vector<int> ranks;                 // per goal, declaration order
};

struct EquivalenceReport {
  std::string digest;
  bool positive_theory = false;
  std::vector<VarId> procedure_best;
  std::vector<VarId> semantic_optimal;
  bool agree = false;
  std::vector<ActionTrace> traces;  // filled when the sets differ
};

inline EquivalenceReport check_equivalence(const DecisionModel& m,
                                           std::uint32_t cap = kDefaultStateCap) {
  EquivalenceReport rep;
  rep.digest = digest_hex(m);
  rep.positive_theory = is_positive_theory(m);
  StrengthTable strengths(m);
  SemanticsTable ranks(m, cap);
  rep.procedure_best = best_actions(strengths);
  rep.semantic_optimal = optimal_actions(ranks);
  // Both sets come out in declaration order, so vector equality is set
  // equality.
  rep.agree = rep.procedure_best == rep.semantic_optimal;
  if (!rep.agree) {
    for (VarId a : m.actions()) {
      ActionTrace t;
      t.action = a;
      for (std::size_t g = 0; g < m.goals().size(); ++g) {
        t.strengths.push_back(strengths.strength(g, a));
        t.ranks.push_back(ranks.rank(a, g));
      }
      rep.traces.push_back(std::move(t));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Deterministic random models for the equivalence campaign.

struct FuzzLimits {
  std::uint32_t max_input_vars = 4;
  std::uint32_t max_actions = 4;
  std::uint32_t max_goals = 4;
  std::uint32_t max_rules = 12;
  int priority_span = 4;      // goal priorities drawn from [1, priority_span]
  int max_rule_priority = 3;  // rule priorities drawn from [0, max_rule_priority]
  bool linear_priorities = false;  // pairwise distinct goal priorities
  bool with_observations = false;
  // Conflicting rule pairs (one action concluding both a goal literal and its
  // complement) sit outside the equivalence guarantee even in positive
  // theories; the campaign keeps them off unless asked.
  bool allow_conflicting_heads = false;
};

namespace detail {

inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

}  // namespace detail

inline DecisionModel random_positive_model(std::uint64_t seed,
                                           const FuzzLimits& lim = {}) {
  std::mt19937_64 rng(seed);
  const auto n_inputs =
      static_cast<std::size_t>(detail::draw(rng, lim.max_input_vars + 1));
  const auto n_actions =
      static_cast<std::size_t>(1 + detail::draw(rng, lim.max_actions));
  const auto n_goals =
      static_cast<std::size_t>(1 + detail::draw(rng, lim.max_goals));
  const auto n_rules =
      static_cast<std::size_t>(detail::draw(rng, lim.max_rules + 1));

  RawModel raw;
  std::vector<std::string> inputs, actions, goal_vars;
  for (std::size_t i = 0; i < n_inputs; ++i)
    inputs.push_back("i" + std::to_string(i + 1));
  for (std::size_t a = 0; a < n_actions; ++a) {
    actions.push_back("a" + std::to_string(a + 1));
    raw.statements.push_back(ActionDecl{actions.back(), {}});
  }
  for (std::size_t g = 0; g < n_goals; ++g)
    goal_vars.push_back("g" + std::to_string(g + 1));

  std::vector<int> priorities(n_goals);
  if (lim.linear_priorities) {
    for (std::size_t g = 0; g < n_goals; ++g)
      priorities[g] = static_cast<int>(g + 1);
    for (std::size_t g = n_goals; g > 1; --g)
      std::swap(priorities[g - 1],
                priorities[static_cast<std::size_t>(detail::draw(rng, g))]);
  } else {
    for (std::size_t g = 0; g < n_goals; ++g)
      priorities[g] = 1 + static_cast<int>(detail::draw(
                              rng, static_cast<std::uint64_t>(lim.priority_span)));
  }
  for (std::size_t g = 0; g < n_goals; ++g) {
    Polarity pol = detail::draw(rng, 2) ? Polarity::Negative : Polarity::Positive;
    raw.statements.push_back(
        GoalDecl{RawLiteral{goal_vars[g], false, {}}, pol, priorities[g], {}});
  }

  // Rules may also belong to the default action, so it joins the pool.
  std::vector<std::string> pool = actions;
  pool.push_back(std::string(kDoNothing));
  // Head sign fixed per (action, goal variable) unless conflicts are allowed.
  std::vector<std::optional<bool>> head_sign(pool.size() * n_goals);
  for (std::size_t r = 0; r < n_rules; ++r) {
    RuleDecl rule;
    std::size_t a = static_cast<std::size_t>(detail::draw(rng, pool.size()));
    std::size_t g = static_cast<std::size_t>(detail::draw(rng, n_goals));
    bool negated;
    if (lim.allow_conflicting_heads) {
      negated = detail::draw(rng, 2) != 0;
    } else {
      auto& fixed = head_sign[a * n_goals + g];
      if (!fixed) fixed = detail::draw(rng, 2) != 0;
      negated = *fixed;
    }
    rule.head = RawLiteral{goal_vars[g], negated, {}};
    rule.priority = static_cast<long long>(detail::draw(
        rng, static_cast<std::uint64_t>(lim.max_rule_priority) + 1));
    rule.body.push_back(RawLiteral{pool[a], false, {}});
    if (!inputs.empty()) {
      std::vector<std::size_t> idx(inputs.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(detail::draw(rng, i))]);
      auto k = static_cast<std::size_t>(detail::draw(rng, inputs.size() + 1));
      idx.resize(k);
      std::sort(idx.begin(), idx.end());
      for (std::size_t i : idx)
        rule.body.push_back(RawLiteral{inputs[i], false, {}});
    }
    raw.statements.push_back(std::move(rule));
  }

  for (std::size_t i = 0; i < n_inputs; ++i) {
    switch (detail::draw(rng, 3)) {
      case 0:
        raw.statements.push_back(PlausibilityDecl{
            RawLiteral{inputs[i], false, {}}, PlausibilityClass::Likely, {}});
        break;
      case 2:
        raw.statements.push_back(PlausibilityDecl{
            RawLiteral{inputs[i], false, {}}, PlausibilityClass::Unlikely, {}});
        break;
      default:
        break;  // plausible is the default
    }
  }
  if (lim.with_observations) {
    for (std::size_t i = 0; i < n_inputs; ++i) {
      if (detail::draw(rng, 4) != 0) continue;
      raw.statements.push_back(
          ObserveDecl{RawLiteral{inputs[i], detail::draw(rng, 2) != 0, {}}, {}});
    }
  }

  ValidationResult res = validate(raw);
  if (!res.ok())
    throw std::logic_error("random_positive_model produced an invalid model");
  return *std::move(res.model);
}

// ---------------------------------------------------------------------------
// Expected-utility comparator: a numeric instantiation of the qualitative
// model, for probing where the order-of-magnitude abstraction leaks.

struct EuConfig {
  double epsilon = 1e-3;  // probability weight of one rank of surprise
  double base = 1e3;      // utility magnitude ratio between priority levels
  double delta = 1e-3;    // chance a firing default rule still misses
};

struct EuEntry {
  VarId action = 0;
  double value = 0.0;
};

struct EuReport {
  EuConfig config;
  std::vector<EuEntry> values;     // declaration order
  std::vector<VarId> eu_optimal;   // argmax with relative tie tolerance
  std::vector<VarId> qualitative;  // semantic optimal set
  bool agree = false;
};

namespace detail {

// Probability of one input state: independent per-variable weights epsilon^k,
// normalized within each variable.
inline double state_probability(const DecisionModel& m, const InputState& s,
                                double epsilon) {
  double p = 1.0;
  const auto& inputs = m.inputs();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    bool truth = s.truth(static_cast<std::uint32_t>(i));
    double w_true = 1.0, w_false = 1.0;
    switch (m.plausibility(inputs[i])) {
      case PlausibilityClass::Likely: w_false = epsilon; break;
      case PlausibilityClass::Unlikely: w_true = epsilon; break;
      case PlausibilityClass::Plausible: break;
    }
    p *= (truth ? w_true : w_false) / (w_true + w_false);
  }
  return p;
}

}  // namespace detail

inline double expected_utility(const DecisionModel& m, const EuConfig& cfg,
                               VarId action,
                               std::uint32_t cap = kDefaultStateCap) {
  auto states = enumerate_input_states(m, cap);
  std::vector<double> prob(states.size(), 0.0);
  double total = 0.0;
  for (std::size_t si = 0; si < states.size(); ++si) {
    if (!state_satisfies_observations(m, states[si])) continue;
    prob[si] = detail::state_probability(m, states[si], cfg.epsilon);
    total += prob[si];
  }
  double eu = 0.0;
  for (std::size_t g = 0; g < m.goals().size(); ++g) {
    Literal lit = m.goals()[g].literal;
    double u = (m.goals()[g].polarity == Polarity::Positive ? 1.0 : -1.0) *
               std::pow(cfg.base, m.goals()[g].priority);
    double p_goal = 0.0;
    for (std::size_t si = 0; si < states.size(); ++si) {
      if (prob[si] == 0.0) continue;
      bool pro = supports(m, action, states[si], lit);
      bool con = supports(m, action, states[si], lit.complement());
      double cond = pro ? (con ? 0.5 : 1.0 - cfg.delta) : cfg.delta;
      p_goal += (prob[si] / total) * cond;
    }
    eu += u * p_goal;
  }
  return eu;
}

inline EuReport eu_compare(const DecisionModel& m, const EuConfig& cfg = {},
                           std::uint32_t cap = kDefaultStateCap) {
  EuReport rep;
  rep.config = cfg;
  double best = 0.0;
  for (VarId a : m.actions()) {
    double v = expected_utility(m, cfg, a, cap);
    if (rep.values.empty() || v > best) best = v;
    rep.values.push_back({a, v});
  }
  double tol = 1e-12 * std::max(1.0, std::fabs(best));
  for (const EuEntry& e : rep.values)
    if (e.value >= best - tol) rep.eu_optimal.push_back(e.action);
  rep.qualitative = optimal_actions(m, cap);
  rep.agree = rep.eu_optimal == rep.qualitative;
  return rep;
}

// ---------------------------------------------------------------------------
// Sensitivity of the optimal set to one-step plausibility changes.

// The goal carrying a pairwise preference: the topmost priority level where
// the two rank vectors differ must favor the winner; the first such goal in
// declaration order is the justification.
inline std::optional<std::size_t> justifying_goal(const SemanticsTable& t,
                                                  VarId a, VarId b) {
  if (!preferred(t, a, b)) return std::nullopt;
  const DecisionModel& m = t.model();
  auto order = goals_by_priority(m);
  std::size_t i = 0;
  while (i < order.size()) {
    int prio = m.goals()[order[i]].priority;
    std::size_t end = i;
    while (end < order.size() && m.goals()[order[end]].priority == prio) ++end;
    std::optional<std::size_t> found;
    bool any_diff = false;
    for (std::size_t j = i; j < end; ++j) {
      int ra = t.rank(a, order[j]);
      int rb = t.rank(b, order[j]);
      if (ra != rb) any_diff = true;
      if (ra > rb && !found) found = order[j];
    }
    if (any_diff) {
      // The topmost differing level must favor the preferred action.
      assert(found.has_value());
      return found;
    }
    i = end;
  }
  return std::nullopt;  // unreachable when a is preferred to b
}

inline std::optional<std::size_t> justifying_goal(
    const DecisionModel& m, VarId a, VarId b,
    std::uint32_t cap = kDefaultStateCap) {
  return justifying_goal(SemanticsTable(m, cap), a, b);
}

// One pairwise preference that reversed under a perturbation, with the goal
// justifying each direction.
struct FlippedPreference {
  VarId winner_before = 0;
  VarId winner_after = 0;
  std::size_t justifying_before = 0;
  std::size_t justifying_after = 0;
};

struct Perturbation {
  VarId variable = 0;
  PlausibilityClass from = PlausibilityClass::Plausible;
  PlausibilityClass to = PlausibilityClass::Plausible;
  std::vector<VarId> optimal_before;
  std::vector<VarId> optimal_after;
  bool changed = false;
  std::vector<FlippedPreference> flips;
  bool critical = false;
};

struct SensitivityReport {
  std::vector<VarId> optimal;
  std::vector<Perturbation> perturbations;
  bool any_critical = false;
};

namespace detail {

inline std::vector<PlausibilityClass> one_step_neighbors(PlausibilityClass c) {
  switch (c) {
    case PlausibilityClass::Likely: return {PlausibilityClass::Plausible};
    case PlausibilityClass::Unlikely: return {PlausibilityClass::Plausible};
    default:
      return {PlausibilityClass::Likely, PlausibilityClass::Unlikely};
  }
}

}  // namespace detail

// A perturbation is critical when it changes the optimal set and some
// reversed preference is now justified by a strictly more important goal:
// the decision was resting on less than it seemed.
inline SensitivityReport sensitivity_scan(const DecisionModel& m,
                                          std::uint32_t cap = kDefaultStateCap) {
  SensitivityReport rep;
  SemanticsTable base(m, cap);
  rep.optimal = optimal_actions(base);
  for (VarId v : m.inputs()) {
    PlausibilityClass from = m.plausibility(v);
    for (PlausibilityClass to : detail::one_step_neighbors(from)) {
      Perturbation p;
      p.variable = v;
      p.from = from;
      p.to = to;
      p.optimal_before = rep.optimal;
      DecisionModel changed_model = m.with_plausibility(v, to);
      SemanticsTable after(changed_model, cap);
      p.optimal_after = optimal_actions(after);
      p.changed = p.optimal_after != p.optimal_before;
      if (p.changed) {
        for (VarId x : m.actions())
          for (VarId y : m.actions()) {
            if (x == y) continue;
            if (!preferred(base, x, y) || !preferred(after, y, x)) continue;
            FlippedPreference flip;
            flip.winner_before = x;
            flip.winner_after = y;
            flip.justifying_before = *justifying_goal(base, x, y);
            flip.justifying_after = *justifying_goal(after, y, x);
            if (m.goals()[flip.justifying_after].priority >
                m.goals()[flip.justifying_before].priority)
              p.critical = true;
            p.flips.push_back(flip);
          }
      }
      rep.any_critical = rep.any_critical || p.critical;
      rep.perturbations.push_back(std::move(p));
    }
  }
  return rep;
}

}  // namespace qdm
