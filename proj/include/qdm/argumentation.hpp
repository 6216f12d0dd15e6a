#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qdm/model.hpp"

namespace qdm {

// Strength of the reason a goal gives for or against an action.  The order
// matters: strong beats weak beats empty.
enum class ReasonStrength : std::uint8_t { Empty = 0, Weak = 1, Strong = 2 };

inline std::string_view to_string(ReasonStrength s) {
  switch (s) {
    case ReasonStrength::Strong: return "strong";
    case ReasonStrength::Weak: return "weak";
    default: return "empty";
  }
}

// Plausibility of a literal, folding in observations.  An observed literal is
// likely and its complement unlikely no matter what the prior statements say.
inline PlausibilityClass classify_literal(const DecisionModel& m, Literal lit) {
  if (!m.is_input(lit.var))
    throw std::invalid_argument("classify_literal: not an input literal");
  if (auto obs = m.observation_on(lit.var)) {
    return *obs == lit ? PlausibilityClass::Likely : PlausibilityClass::Unlikely;
  }
  PlausibilityClass cls = m.plausibility(lit.var);
  return lit.negated ? flip(cls) : cls;
}

// A rule is likely when its whole condition is likely (vacuously so for an
// empty body), unlikely when any conjunct is unlikely, plausible otherwise.
inline PlausibilityClass classify_rule(const DecisionModel& m,
                                       const ActionRule& rule) {
  bool all_likely = true;
  for (Literal l : rule.body) {
    switch (classify_literal(m, l)) {
      case PlausibilityClass::Unlikely: return PlausibilityClass::Unlikely;
      case PlausibilityClass::Plausible: all_likely = false; break;
      case PlausibilityClass::Likely: break;
    }
  }
  return all_likely ? PlausibilityClass::Likely : PlausibilityClass::Plausible;
}

// Everything the reason for one (goal, action) pair rests on: the live rules
// concluding the goal literal and the live rules concluding its complement.
// Unlikely rules are inert and are not recorded.
struct ReasonRecord {
  std::size_t goal = 0;  // index into goals()
  VarId action = 0;
  ReasonStrength strength = ReasonStrength::Empty;
  std::vector<std::size_t> supporting;  // rule indices, head == goal literal
  std::vector<std::size_t> opposing;    // rule indices, head == complement
};

namespace detail {

constexpr long long kNoRule = LLONG_MIN;

struct StrengthScan {
  long long sup_likely = kNoRule;  // best priority of a likely rule for the goal
  long long sup_live = kNoRule;    // best priority of a likely-or-plausible rule
  long long opp_likely = kNoRule;  // same, for rules concluding the complement
  long long opp_live = kNoRule;
};

inline ReasonStrength strength_of(const StrengthScan& s) {
  // Strong: a likely rule for the goal with no live conflicting rule of equal
  // or higher priority.  Weak: not strong, some live rule for the goal, and
  // no likely conflicting rule of strictly higher priority.
  if (s.sup_likely != kNoRule && s.sup_likely > s.opp_live)
    return ReasonStrength::Strong;
  if (s.sup_live != kNoRule && s.sup_live >= s.opp_likely)
    return ReasonStrength::Weak;
  return ReasonStrength::Empty;
}

}  // namespace detail

// Precomputed reason strengths for every (goal, action) pair, plus the rule
// bookkeeping explanations need.  Indexing is by goal index and by action
// position within model.actions().
class StrengthTable {
 public:
  explicit StrengthTable(const DecisionModel& m) : model_(&m) {
    const auto goals = m.goals().size();
    const auto acts = m.actions().size();
    records_.resize(goals * acts);
    std::vector<detail::StrengthScan> scan(goals * acts);
    for (std::size_t g = 0; g < goals; ++g)
      for (std::size_t a = 0; a < acts; ++a) {
        records_[g * acts + a].goal = g;
        records_[g * acts + a].action = m.actions()[a];
      }
    for (std::size_t ri = 0; ri < m.rules().size(); ++ri) {
      const ActionRule& r = m.rules()[ri];
      auto g = m.goal_of(r.head.var);
      if (!g) continue;  // unreachable in a validated model
      PlausibilityClass cls = classify_rule(m, r);
      if (cls == PlausibilityClass::Unlikely) continue;
      std::size_t idx = *g * acts + m.position(r.action);
      auto& s = scan[idx];
      auto& rec = records_[idx];
      bool for_goal = r.head == m.goals()[*g].literal;
      long long prio = r.priority;
      if (for_goal) {
        rec.supporting.push_back(ri);
        s.sup_live = std::max(s.sup_live, prio);
        if (cls == PlausibilityClass::Likely)
          s.sup_likely = std::max(s.sup_likely, prio);
      } else {
        rec.opposing.push_back(ri);
        s.opp_live = std::max(s.opp_live, prio);
        if (cls == PlausibilityClass::Likely)
          s.opp_likely = std::max(s.opp_likely, prio);
      }
    }
    for (std::size_t i = 0; i < records_.size(); ++i)
      records_[i].strength = detail::strength_of(scan[i]);
  }

  [[nodiscard]] const DecisionModel& model() const { return *model_; }

  [[nodiscard]] ReasonStrength strength(std::size_t goal, VarId action) const {
    return record(goal, action).strength;
  }

  [[nodiscard]] const ReasonRecord& record(std::size_t goal, VarId action) const {
    return records_[goal * model_->actions().size() + model_->position(action)];
  }

 private:
  const DecisionModel* model_;
  std::vector<ReasonRecord> records_;
};

inline ReasonStrength reason_strength(const DecisionModel& m, std::size_t goal,
                                      VarId action) {
  const Goal& g = m.goals()[goal];
  detail::StrengthScan s;
  for (const ActionRule& r : m.rules()) {
    if (r.action != action || r.head.var != g.literal.var) continue;
    PlausibilityClass cls = classify_rule(m, r);
    if (cls == PlausibilityClass::Unlikely) continue;
    long long prio = r.priority;
    if (r.head == g.literal) {
      s.sup_live = std::max(s.sup_live, prio);
      if (cls == PlausibilityClass::Likely) s.sup_likely = std::max(s.sup_likely, prio);
    } else {
      s.opp_live = std::max(s.opp_live, prio);
      if (cls == PlausibilityClass::Likely) s.opp_likely = std::max(s.opp_likely, prio);
    }
  }
  return detail::strength_of(s);
}

// A is better than B over one goal when the goal hands A the more compelling
// case: a stronger reason for A when the goal is pursued, a stronger reason
// against B when it is avoided.
inline bool better_over_goal(const StrengthTable& t, VarId a, VarId b,
                             std::size_t goal) {
  const Goal& g = t.model().goals()[goal];
  if (g.polarity == Polarity::Positive)
    return t.strength(goal, a) > t.strength(goal, b);
  return t.strength(goal, b) > t.strength(goal, a);
}

namespace detail {

// Goal indices grouped by priority, highest level first.
inline std::vector<std::vector<std::size_t>> priority_levels(
    const DecisionModel& m) {
  std::vector<int> prios;
  for (const Goal& g : m.goals()) prios.push_back(g.priority);
  std::sort(prios.begin(), prios.end(), std::greater<>());
  prios.erase(std::unique(prios.begin(), prios.end()), prios.end());
  std::vector<std::vector<std::size_t>> levels(prios.size());
  for (std::size_t g = 0; g < m.goals().size(); ++g) {
    auto it = std::find(prios.begin(), prios.end(), m.goals()[g].priority);
    levels[static_cast<std::size_t>(it - prios.begin())].push_back(g);
  }
  return levels;
}

}  // namespace detail

// Walks the priority levels from the top down.  A level where any goal favors
// B settles the question against A; a level where goals favor only A settles
// it for A; a silent level defers to the next one.
inline bool better(const StrengthTable& t, VarId a, VarId b) {
  for (const auto& level : detail::priority_levels(t.model())) {
    for (std::size_t g : level)
      if (better_over_goal(t, b, a, g)) return false;
    for (std::size_t g : level)
      if (better_over_goal(t, a, b, g)) return true;
  }
  return false;
}

inline bool better(const DecisionModel& m, VarId a, VarId b) {
  return better(StrengthTable(m), a, b);
}

// The first goal, scanning priority levels downward, that settles the
// comparison in a's favor; empty when a is not better than b.
inline std::optional<std::size_t> deciding_goal(const StrengthTable& t, VarId a,
                                                VarId b) {
  for (const auto& level : detail::priority_levels(t.model())) {
    std::optional<std::size_t> first;
    bool against = false;
    for (std::size_t g : level) {
      if (!first && better_over_goal(t, a, b, g)) first = g;
      if (better_over_goal(t, b, a, g)) against = true;
    }
    if (against) return std::nullopt;
    if (first) return first;
  }
  return std::nullopt;
}

// The actions no other action is better than, in declaration order.  The
// betterness relation is acyclic, so the set is never empty.
inline std::vector<VarId> best_actions(const StrengthTable& t) {
  std::vector<VarId> best;
  for (VarId a : t.model().actions()) {
    bool beaten = false;
    for (VarId b : t.model().actions())
      if (b != a && better(t, b, a)) {
        beaten = true;
        break;
      }
    if (!beaten) best.push_back(a);
  }
  if (best.empty())
    throw std::logic_error("best_actions: betterness produced a cycle");
  return best;
}

inline std::vector<VarId> best_actions(const DecisionModel& m) {
  return best_actions(StrengthTable(m));
}

// ---------------------------------------------------------------------------
// Linear selection: when every goal sits on its own priority level, the best
// actions fall out of one filtering sweep instead of pairwise comparison.

struct SelectStep {
  int priority = 0;
  std::size_t goal = 0;
  std::vector<VarId> eliminated;
};

struct SelectResult {
  std::vector<VarId> actions;
  std::vector<SelectStep> steps;
};

// Requires pairwise distinct goal priorities; returns nothing otherwise and
// the caller falls back to best_actions.
inline std::optional<SelectResult> select_linear(const StrengthTable& t) {
  const DecisionModel& m = t.model();
  std::vector<std::size_t> order(m.goals().size());
  for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return m.goals()[x].priority > m.goals()[y].priority;
  });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (m.goals()[order[i - 1]].priority == m.goals()[order[i]].priority)
      return std::nullopt;

  SelectResult result;
  result.actions = m.actions();
  for (std::size_t g : order) {
    if (result.actions.size() <= 1) break;
    const Goal& goal = m.goals()[g];
    // Pursued goals keep the strongest supporters, avoided goals keep the
    // least threatened.
    ReasonStrength pick = t.strength(g, result.actions[0]);
    for (VarId a : result.actions) {
      ReasonStrength s = t.strength(g, a);
      if (goal.polarity == Polarity::Positive ? s > pick : s < pick) pick = s;
    }
    SelectStep step{goal.priority, g, {}};
    std::vector<VarId> keep;
    for (VarId a : result.actions) {
      if (t.strength(g, a) == pick)
        keep.push_back(a);
      else
        step.eliminated.push_back(a);
    }
    result.actions = std::move(keep);
    result.steps.push_back(std::move(step));
  }
  return result;
}

inline std::optional<SelectResult> select_linear(const DecisionModel& m) {
  return select_linear(StrengthTable(m));
}

}  // namespace qdm
