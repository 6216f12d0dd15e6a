#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdm/kappa.hpp"
#include "qdm/model.hpp"

namespace qdm {

// Prior disbelief rank of a complete input state: one point of surprise for
// every variable whose value goes against its stated plausibility.
inline KappaValue kappa_prior(const DecisionModel& m, const InputState& s) {
  KappaValue k(0);
  const auto& inputs = m.inputs();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    bool truth = s.truth(static_cast<std::uint32_t>(i));
    PlausibilityClass cls = m.plausibility(inputs[i]);
    bool surprising = (truth && cls == PlausibilityClass::Unlikely) ||
                      (!truth && cls == PlausibilityClass::Likely);
    if (surprising) k = k + KappaValue(1);
  }
  return k;
}

inline bool state_satisfies_observations(const DecisionModel& m,
                                         const InputState& s) {
  for (Literal o : m.observations())
    if (!m.satisfies(s, o)) return false;
  return true;
}

// Rank of the observation event itself: the least surprising way it can hold.
inline KappaValue kappa_observation(const DecisionModel& m,
                                    std::uint32_t cap = kDefaultStateCap) {
  KappaValue best = KappaValue::infinity();
  for (const InputState& s : enumerate_input_states(m, cap))
    if (state_satisfies_observations(m, s))
      best = KappaValue::min(best, kappa_prior(m, s));
  return best;
}

// Conditioning on the observations: shift ranks down so the least surprising
// consistent state sits at zero, and push inconsistent states to infinity.
inline KappaValue kappa_posterior(const DecisionModel& m, const InputState& s,
                                  std::uint32_t cap = kDefaultStateCap) {
  if (!state_satisfies_observations(m, s)) return KappaValue::infinity();
  return kappa_prior(m, s) - kappa_observation(m, cap);
}

// A literal is supported in a state when some rule of the action concludes it
// there and no conflicting rule fires with strictly higher priority.
inline bool supports(const DecisionModel& m, VarId action, const InputState& s,
                     Literal lit) {
  int best_for = -1;
  int best_against = -1;
  for (const ActionRule& r : m.rules()) {
    if (r.action != action || r.head.var != lit.var) continue;
    if (!m.body_true(s, r)) continue;
    int& slot = (r.head == lit) ? best_for : best_against;
    slot = std::max(slot, r.priority);
  }
  return best_for >= 0 && best_for >= best_against;
}

// Disbelief in a goal literal given the action and a complete state.  The
// literal is believed outright when supported; a declared goal literal whose
// complement is in question defaults to false when nothing supports it.
inline KappaValue kappa_conditional(const DecisionModel& m, VarId action,
                                    Literal lit, const InputState& s) {
  auto g = m.goal_of(lit.var);
  if (!g) throw std::invalid_argument("kappa_conditional: not a goal literal");
  if (supports(m, action, s, lit)) return KappaValue(0);
  if (m.goals()[*g].literal == lit.complement() &&
      !supports(m, action, s, lit.complement()))
    return KappaValue(0);
  return KappaValue(1);
}

// Disbelief in a goal literal under the action, all states considered.
inline KappaValue kappa_goal(const DecisionModel& m, VarId action, Literal lit,
                             std::uint32_t cap = kDefaultStateCap) {
  KappaValue best = KappaValue::infinity();
  KappaValue obs = kappa_observation(m, cap);
  for (const InputState& s : enumerate_input_states(m, cap)) {
    if (!state_satisfies_observations(m, s)) continue;
    KappaValue post = kappa_prior(m, s) - obs;
    best = KappaValue::min(best, post + kappa_conditional(m, action, lit, s));
  }
  return best;
}

// Signed worth of a goal: its priority, negated for goals to avoid.
inline long long utility(const DecisionModel& m, std::size_t goal) {
  const Goal& g = m.goals()[goal];
  return g.polarity == Polarity::Positive ? g.priority : -g.priority;
}

namespace detail {

inline int sign_of(long long v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

}  // namespace detail

// Net belief in a goal literal under an action: disbelief in its complement
// minus disbelief in it.  Always lands in {-1, 0, +1}.
inline int belief(const DecisionModel& m, VarId action, std::size_t goal,
                  std::uint32_t cap = kDefaultStateCap) {
  Literal lit = m.goals()[goal].literal;
  KappaValue pro = kappa_goal(m, action, lit, cap);
  KappaValue con = kappa_goal(m, action, lit.complement(), cap);
  long long b = static_cast<long long>(con.finite()) -
                static_cast<long long>(pro.finite());
  assert(b >= -1 && b <= 1);
  return static_cast<int>(b);
}

// Whether the action helps (+1), hurts (-1), or leaves open (0) the goal.
inline int qualitative_rank(const DecisionModel& m, VarId action,
                            std::size_t goal,
                            std::uint32_t cap = kDefaultStateCap) {
  return detail::sign_of(utility(m, goal)) *
         detail::sign_of(belief(m, action, goal, cap));
}

// Bulk form of the ranking semantics: state table, per-state support bits,
// and per-goal beliefs for every action.  Actions are indexed by position.
class SemanticsTable {
 public:
  explicit SemanticsTable(const DecisionModel& m,
                          std::uint32_t cap = kDefaultStateCap)
      : model_(&m), states_(enumerate_input_states(m, cap)) {
    const auto acts = m.actions().size();
    const auto goals = m.goals().size();

    posterior_.reserve(states_.size());
    KappaValue obs = KappaValue::infinity();
    for (const InputState& s : states_)
      if (state_satisfies_observations(m, s))
        obs = KappaValue::min(obs, kappa_prior(m, s));
    for (const InputState& s : states_) {
      posterior_.push_back(state_satisfies_observations(m, s)
                               ? kappa_prior(m, s) - obs
                               : KappaValue::infinity());
    }

    kappa_pro_.assign(acts * goals, KappaValue::infinity());
    kappa_con_.assign(acts * goals, KappaValue::infinity());
    for (std::size_t a = 0; a < acts; ++a) {
      VarId action = m.actions()[a];
      for (std::size_t si = 0; si < states_.size(); ++si) {
        if (posterior_[si].is_infinite()) continue;
        for (std::size_t g = 0; g < goals; ++g) {
          Literal lit = m.goals()[g].literal;
          bool sup_pro = supports(m, action, states_[si], lit);
          bool sup_con = supports(m, action, states_[si], lit.complement());
          // The declared goal literal holds when supported; its complement
          // holds when supported or, by default, when neither side is.
          KappaValue cond_pro(sup_pro ? 0 : 1);
          KappaValue cond_con(sup_con ? 0 : (sup_pro ? 1 : 0));
          std::size_t idx = a * goals + g;
          kappa_pro_[idx] =
              KappaValue::min(kappa_pro_[idx], posterior_[si] + cond_pro);
          kappa_con_[idx] =
              KappaValue::min(kappa_con_[idx], posterior_[si] + cond_con);
        }
      }
    }

    belief_.assign(acts * goals, 0);
    rank_.assign(acts * goals, 0);
    for (std::size_t i = 0; i < acts * goals; ++i) {
      belief_[i] = static_cast<int>(
          static_cast<long long>(kappa_con_[i].finite()) -
          static_cast<long long>(kappa_pro_[i].finite()));
      rank_[i] = detail::sign_of(utility(m, i % goals)) *
                 detail::sign_of(belief_[i]);
    }
  }

  [[nodiscard]] const DecisionModel& model() const { return *model_; }
  [[nodiscard]] const std::vector<InputState>& states() const { return states_; }
  [[nodiscard]] KappaValue posterior(std::size_t state) const {
    return posterior_[state];
  }
  [[nodiscard]] KappaValue kappa(VarId action, std::size_t goal,
                                 bool complement = false) const {
    std::size_t idx = model_->position(action) * model_->goals().size() + goal;
    return complement ? kappa_con_[idx] : kappa_pro_[idx];
  }
  [[nodiscard]] int belief(VarId action, std::size_t goal) const {
    return belief_[model_->position(action) * model_->goals().size() + goal];
  }
  [[nodiscard]] int rank(VarId action, std::size_t goal) const {
    return rank_[model_->position(action) * model_->goals().size() + goal];
  }

 private:
  const DecisionModel* model_;
  std::vector<InputState> states_;
  std::vector<KappaValue> posterior_;
  std::vector<KappaValue> kappa_pro_, kappa_con_;
  std::vector<int> belief_, rank_;
};

// Per-goal ranks of one action, highest priority first, declaration order
// breaking ties.  Rendered like "<+1, 0, -1>".
struct RankVector {
  std::vector<std::size_t> goals;
  std::vector<int> ranks;
};

inline std::vector<std::size_t> goals_by_priority(const DecisionModel& m) {
  std::vector<std::size_t> order(m.goals().size());
  for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return m.goals()[x].priority > m.goals()[y].priority;
  });
  return order;
}

inline RankVector rank_vector(const SemanticsTable& t, VarId action) {
  RankVector rv;
  rv.goals = goals_by_priority(t.model());
  for (std::size_t g : rv.goals) rv.ranks.push_back(t.rank(action, g));
  return rv;
}

inline std::string to_string(const RankVector& rv) {
  std::string out = "<";
  for (std::size_t i = 0; i < rv.ranks.size(); ++i) {
    if (i) out += ", ";
    if (rv.ranks[i] > 0) out += "+1";
    else if (rv.ranks[i] < 0) out += "-1";
    else out += "0";
  }
  out += ">";
  return out;
}

// A is preferred to B when some goal ranks A strictly higher and no goal of
// equal or higher priority ranks B higher.
inline bool preferred(const SemanticsTable& t, VarId a, VarId b) {
  const DecisionModel& m = t.model();
  for (std::size_t g = 0; g < m.goals().size(); ++g) {
    if (t.rank(a, g) <= t.rank(b, g)) continue;
    bool blocked = false;
    for (std::size_t h = 0; h < m.goals().size(); ++h) {
      if (m.goals()[h].priority < m.goals()[g].priority) continue;
      if (t.rank(b, h) > t.rank(a, h)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return true;
  }
  return false;
}

inline bool preferred(const DecisionModel& m, VarId a, VarId b,
                      std::uint32_t cap = kDefaultStateCap) {
  return preferred(SemanticsTable(m, cap), a, b);
}

// The actions no other action is preferred to, in declaration order.
inline std::vector<VarId> optimal_actions(const SemanticsTable& t) {
  std::vector<VarId> best;
  for (VarId a : t.model().actions()) {
    bool beaten = false;
    for (VarId b : t.model().actions())
      if (b != a && preferred(t, b, a)) {
        beaten = true;
        break;
      }
    if (!beaten) best.push_back(a);
  }
  if (best.empty())
    throw std::logic_error("optimal_actions: preference produced a cycle");
  return best;
}

inline std::vector<VarId> optimal_actions(const DecisionModel& m,
                                          std::uint32_t cap = kDefaultStateCap) {
  return optimal_actions(SemanticsTable(m, cap));
}

}  // namespace qdm
