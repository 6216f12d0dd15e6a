#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qdm/diagnostics.hpp"

namespace qdm {

inline constexpr std::string_view kDoNothing = "do-nothing";

using VarId = std::uint32_t;

enum class VarKind : std::uint8_t { Input, Action, Goal };

struct Variable {
  std::string name;
  VarKind kind;
  bool operator==(const Variable&) const = default;
};

struct Literal {
  VarId var = 0;
  bool negated = false;

  [[nodiscard]] Literal complement() const { return Literal{var, !negated}; }
  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
};

enum class Polarity : std::uint8_t { Positive, Negative };

// Plausibility class of a literal.  Plausible is the default for every input
// literal; likely/unlikely come from explicit statements or observations.
enum class PlausibilityClass : std::uint8_t { Likely, Plausible, Unlikely };

inline PlausibilityClass flip(PlausibilityClass c) {
  switch (c) {
    case PlausibilityClass::Likely: return PlausibilityClass::Unlikely;
    case PlausibilityClass::Unlikely: return PlausibilityClass::Likely;
    default: return PlausibilityClass::Plausible;
  }
}

inline std::string_view to_string(PlausibilityClass c) {
  switch (c) {
    case PlausibilityClass::Likely: return "likely";
    case PlausibilityClass::Unlikely: return "unlikely";
    default: return "plausible";
  }
}

struct Goal {
  Literal literal;  // over a goal-base variable
  Polarity polarity = Polarity::Positive;
  int priority = 0;  // non-negative; larger means more important
  bool operator==(const Goal&) const = default;
};

struct ActionRule {
  VarId action = 0;           // defaults to do-nothing when no action is named
  std::vector<Literal> body;  // input literals, one per variable, sorted by id
  Literal head;               // a declared goal literal or its complement
  int priority = 0;
  bool operator==(const ActionRule&) const = default;
};

// ---------------------------------------------------------------------------
// Surface statements.  The parser produces a RawModel; models can also be
// assembled programmatically and passed through validate().

struct RawLiteral {
  std::string name;
  bool negated = false;
  SourceSpan span;
};

struct ActionDecl {
  std::string name;
  SourceSpan span;
};

struct GoalDecl {
  RawLiteral literal;
  Polarity polarity = Polarity::Positive;
  long long priority = 0;
  SourceSpan span;
};

struct RuleDecl {
  // The action atom, when present, is an ordinary body atom naming a declared
  // action; validation pulls it out.
  std::vector<RawLiteral> body;
  RawLiteral head;
  long long priority = 0;
  SourceSpan span;
};

struct PlausibilityDecl {
  RawLiteral literal;
  PlausibilityClass cls = PlausibilityClass::Plausible;
  SourceSpan span;
};

struct ObserveDecl {
  RawLiteral literal;
  SourceSpan span;
};

using RawStatement =
    std::variant<ActionDecl, GoalDecl, RuleDecl, PlausibilityDecl, ObserveDecl>;

struct RawModel {
  std::vector<RawStatement> statements;
};

// ---------------------------------------------------------------------------
// InputState: one truth assignment to the input variables, identified by its
// position in the enumeration order.  Enumeration follows declaration order
// with the positive case first, so state 0 makes every input true and the
// last declared input toggles fastest.

class InputState {
 public:
  InputState(std::uint32_t var_count, std::uint32_t ordinal)
      : count_(var_count), ordinal_(ordinal) {}

  [[nodiscard]] std::uint32_t size() const { return count_; }
  [[nodiscard]] std::uint32_t ordinal() const { return ordinal_; }

  // Truth of the i-th input variable (positions follow declaration order).
  [[nodiscard]] bool truth(std::uint32_t i) const {
    return ((ordinal_ >> (count_ - 1 - i)) & 1u) == 0u;
  }

  bool operator==(const InputState&) const = default;

 private:
  std::uint32_t count_;
  std::uint32_t ordinal_;
};

struct EnumerationCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kDefaultStateCap = 24;

// ---------------------------------------------------------------------------
// DecisionModel: the validated, immutable model all computations run on.

struct ValidationResult;

class DecisionModel {
 public:
  [[nodiscard]] const std::vector<Variable>& variables() const { return vars_; }
  [[nodiscard]] const std::vector<VarId>& inputs() const { return inputs_; }
  [[nodiscard]] const std::vector<VarId>& actions() const { return actions_; }
  [[nodiscard]] const std::vector<Goal>& goals() const { return goals_; }
  [[nodiscard]] const std::vector<ActionRule>& rules() const { return rules_; }
  [[nodiscard]] const std::vector<Literal>& observations() const { return observations_; }
  [[nodiscard]] const std::vector<Diagnostic>& warnings() const { return warnings_; }
  [[nodiscard]] VarId do_nothing() const { return do_nothing_; }

  [[nodiscard]] const std::string& name(VarId v) const { return vars_[v].name; }
  [[nodiscard]] VarKind kind(VarId v) const { return vars_[v].kind; }
  [[nodiscard]] bool is_input(VarId v) const { return kind(v) == VarKind::Input; }
  [[nodiscard]] bool is_action(VarId v) const { return kind(v) == VarKind::Action; }
  [[nodiscard]] bool is_goal_var(VarId v) const { return kind(v) == VarKind::Goal; }

  [[nodiscard]] std::optional<VarId> find(std::string_view name) const {
    for (VarId v = 0; v < vars_.size(); ++v)
      if (vars_[v].name == name) return v;
    return std::nullopt;
  }

  // Position of a variable within inputs() / actions().
  [[nodiscard]] std::uint32_t position(VarId v) const { return position_[v]; }

  // Index into goals() for a goal-base variable.
  [[nodiscard]] std::optional<std::size_t> goal_of(VarId v) const {
    if (goal_index_[v] < 0) return std::nullopt;
    return static_cast<std::size_t>(goal_index_[v]);
  }

  // Plausibility class of the positive literal of an input variable.
  [[nodiscard]] PlausibilityClass plausibility(VarId input) const {
    return plaus_[input];
  }

  [[nodiscard]] std::optional<Literal> observation_on(VarId input) const {
    if (obs_sign_[input] == 0) return std::nullopt;
    return Literal{input, obs_sign_[input] < 0};
  }

  [[nodiscard]] std::string literal_name(Literal l) const {
    return l.negated ? "~" + name(l.var) : name(l.var);
  }

  // Truth of a literal over an input variable in a state.
  [[nodiscard]] bool satisfies(const InputState& s, Literal l) const {
    return s.truth(position_[l.var]) != l.negated;
  }

  [[nodiscard]] bool body_true(const InputState& s, const ActionRule& r) const {
    for (Literal l : r.body)
      if (!satisfies(s, l)) return false;
    return true;
  }

  // Sensitivity hook: a copy of the model with one input variable's
  // plausibility class replaced.  Every other part is untouched.
  [[nodiscard]] DecisionModel with_plausibility(VarId input,
                                                PlausibilityClass cls) const {
    if (!is_input(input))
      throw std::invalid_argument("with_plausibility: not an input variable");
    DecisionModel copy = *this;
    copy.plaus_[input] = cls;
    return copy;
  }

  bool operator==(const DecisionModel& o) const {
    return vars_ == o.vars_ && inputs_ == o.inputs_ && actions_ == o.actions_ &&
           goals_ == o.goals_ && rules_ == o.rules_ && plaus_ == o.plaus_ &&
           observations_ == o.observations_;
  }

 private:
  DecisionModel() = default;
  friend ValidationResult validate(const RawModel&);

  std::vector<Variable> vars_;
  std::vector<VarId> inputs_;
  std::vector<VarId> actions_;
  std::vector<Goal> goals_;
  std::vector<ActionRule> rules_;
  std::vector<PlausibilityClass> plaus_;  // per variable id
  std::vector<std::int8_t> obs_sign_;     // per variable id: 0 none, +1 true, -1 false
  std::vector<Literal> observations_;
  std::vector<Diagnostic> warnings_;
  std::vector<std::uint32_t> position_;
  std::vector<std::int32_t> goal_index_;
  VarId do_nothing_ = 0;
};

struct ValidationResult {
  std::optional<DecisionModel> model;
  std::vector<Diagnostic> errors;

  [[nodiscard]] bool ok() const { return model.has_value(); }
};

inline std::vector<InputState> enumerate_input_states(
    const DecisionModel& model, std::uint32_t cap = kDefaultStateCap) {
  const auto n = static_cast<std::uint32_t>(model.inputs().size());
  if (n > cap)
    throw EnumerationCapError("state enumeration over " + std::to_string(n) +
                              " input variables exceeds the cap of " +
                              std::to_string(cap));
  std::vector<InputState> states;
  states.reserve(1u << n);
  for (std::uint32_t i = 0; i < (1u << n); ++i) states.emplace_back(n, i);
  return states;
}

// Human-readable state label, e.g. "{rain, ~wet}".
inline std::string state_label(const DecisionModel& model, const InputState& s) {
  std::string out = "{";
  for (std::uint32_t i = 0; i < model.inputs().size(); ++i) {
    if (i) out += ", ";
    if (!s.truth(i)) out += '~';
    out += model.name(model.inputs()[i]);
  }
  out += '}';
  return out;
}

// ---------------------------------------------------------------------------
// Validation.

namespace detail {

inline bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  static constexpr std::string_view keywords[] = {
      "action", "goal",   "rule",      "positive", "negative",
      "priority", "likely", "plausible", "unlikely", "observe"};
  for (auto kw : keywords)
    if (s == kw) return false;
  return true;
}

}  // namespace detail

inline ValidationResult validate(const RawModel& raw) {
  DecisionModel m;
  std::vector<Diagnostic> errors;
  std::map<std::string, VarId, std::less<>> by_name;

  auto error = [&](SourceSpan span, std::string msg) {
    errors.push_back({Severity::Error, span, std::move(msg)});
  };
  auto declare = [&](const std::string& name, VarKind kind) -> VarId {
    VarId v = static_cast<VarId>(m.vars_.size());
    m.vars_.push_back({name, kind});
    by_name.emplace(name, v);
    return v;
  };
  auto kind_word = [](VarKind k) -> std::string_view {
    switch (k) {
      case VarKind::Input: return "an input variable";
      case VarKind::Action: return "an action";
      default: return "a goal";
    }
  };

  // Pass 1: declarations.  Actions and goals come first so that body atoms
  // can be told apart from input variables no matter the statement order.
  for (const auto& stmt : raw.statements) {
    if (const auto* a = std::get_if<ActionDecl>(&stmt)) {
      if (!detail::valid_identifier(a->name)) {
        error(a->span, "invalid identifier '" + a->name + "'");
        continue;
      }
      if (by_name.count(a->name)) {
        error(a->span, "duplicate declaration of '" + a->name + "'");
        continue;
      }
      declare(a->name, VarKind::Action);
    }
  }
  if (!by_name.count(std::string(kDoNothing)))
    declare(std::string(kDoNothing), VarKind::Action);

  for (const auto& stmt : raw.statements) {
    if (const auto* g = std::get_if<GoalDecl>(&stmt)) {
      const std::string& nm = g->literal.name;
      if (!detail::valid_identifier(nm)) {
        error(g->span, "invalid identifier '" + nm + "'");
        continue;
      }
      VarId v;
      if (auto it = by_name.find(nm); it != by_name.end()) {
        v = it->second;
        if (m.vars_[v].kind != VarKind::Goal) {
          error(g->span, "'" + nm + "' is already declared as " +
                             std::string(kind_word(m.vars_[v].kind)));
          continue;
        }
      } else {
        v = declare(nm, VarKind::Goal);
      }
      Literal lit{v, g->literal.negated};
      bool clash = false;
      for (const Goal& prev : m.goals_) {
        if (prev.literal.var != v) continue;
        clash = true;
        if (prev.literal == lit)
          error(g->span, "duplicate goal declaration for '" + nm + "'");
        else
          error(g->span, "goal '" + nm + "' and its complement are both declared");
      }
      if (clash) continue;
      if (g->priority < 0) {
        error(g->span, "negative priority for goal '" + nm + "'");
        continue;
      }
      if (g->priority > std::numeric_limits<int>::max()) {
        error(g->span, "priority out of range for goal '" + nm + "'");
        continue;
      }
      if (g->priority == 0)
        m.warnings_.push_back({Severity::Warning, g->span,
                               "goal '" + nm +
                                   "' has priority 0 and can never "
                                   "discriminate between actions"});
      m.goals_.push_back({lit, g->polarity, static_cast<int>(g->priority)});
    }
  }

  // Pass 2: rules, plausibility statements, observations.  Undeclared body
  // atoms register input variables in order of first use.
  auto input_for = [&](const RawLiteral& rl, bool& ok) -> VarId {
    ok = true;
    if (auto it = by_name.find(rl.name); it != by_name.end()) return it->second;
    if (!detail::valid_identifier(rl.name)) {
      error(rl.span, "invalid identifier '" + rl.name + "'");
      ok = false;
      return 0;
    }
    return declare(rl.name, VarKind::Input);
  };

  // Plausibility classes seen so far; needed to spot contradictions between
  // statements that normalize onto the same variable.
  std::map<VarId, PlausibilityClass> declared_class;

  for (const auto& stmt : raw.statements) {
    if (const auto* r = std::get_if<RuleDecl>(&stmt)) {
      std::optional<VarId> action;
      std::vector<Literal> body;
      bool bad = false;
      for (const RawLiteral& atom : r->body) {
        auto it = by_name.find(atom.name);
        if (it != by_name.end() && m.vars_[it->second].kind == VarKind::Action) {
          if (atom.negated) {
            error(atom.span, "action atom '" + atom.name + "' cannot be negated");
            bad = true;
          } else if (action) {
            error(atom.span, "rule names more than one action");
            bad = true;
          } else {
            action = it->second;
          }
          continue;
        }
        if (it != by_name.end() && m.vars_[it->second].kind == VarKind::Goal) {
          error(atom.span,
                "goal '" + atom.name + "' cannot appear in a rule body");
          bad = true;
          continue;
        }
        bool ok = true;
        VarId v = input_for(atom, ok);
        if (!ok) {
          bad = true;
          continue;
        }
        Literal lit{v, atom.negated};
        bool dup = false;
        for (Literal b : body) {
          if (b.var != v) continue;
          dup = true;
          if (b != lit) {
            error(atom.span, "rule body contains '" + atom.name +
                                 "' and its complement");
            bad = true;
          }
        }
        if (!dup) body.push_back(lit);
      }
      auto it = by_name.find(r->head.name);
      if (it == by_name.end() || m.vars_[it->second].kind != VarKind::Goal) {
        error(r->head.span,
              "rule head '" + r->head.name + "' is not a declared goal");
        bad = true;
      }
      if (r->priority < 0) {
        error(r->span, "negative rule priority");
        bad = true;
      }
      if (r->priority > std::numeric_limits<int>::max()) {
        error(r->span, "rule priority out of range");
        bad = true;
      }
      if (bad) continue;
      std::sort(body.begin(), body.end(),
                [](Literal a, Literal b) { return a.var < b.var; });
      m.rules_.push_back({action.value_or(0), std::move(body),
                          Literal{it->second, r->head.negated},
                          static_cast<int>(r->priority)});
      if (!action) m.rules_.back().action = *m.find(kDoNothing);
    } else if (const auto* p = std::get_if<PlausibilityDecl>(&stmt)) {
      auto it = by_name.find(p->literal.name);
      if (it != by_name.end() && m.vars_[it->second].kind != VarKind::Input) {
        error(p->span, "plausibility statement over '" + p->literal.name +
                           "', which is " +
                           std::string(kind_word(m.vars_[it->second].kind)));
        continue;
      }
      bool ok = true;
      VarId v = input_for(p->literal, ok);
      if (!ok) continue;
      // Normalize onto the positive literal: likely ~y means unlikely y, and
      // plausible is symmetric.
      PlausibilityClass cls = p->literal.negated ? flip(p->cls) : p->cls;
      if (auto found = declared_class.find(v); found != declared_class.end()) {
        if (found->second != cls)
          error(p->span, "contradictory plausibility statements for '" +
                             p->literal.name + "'");
        continue;
      }
      declared_class.emplace(v, cls);
    } else if (const auto* o = std::get_if<ObserveDecl>(&stmt)) {
      auto it = by_name.find(o->literal.name);
      if (it != by_name.end() && m.vars_[it->second].kind != VarKind::Input) {
        error(o->span, "observation of '" + o->literal.name + "', which is " +
                           std::string(kind_word(m.vars_[it->second].kind)));
        continue;
      }
      bool ok = true;
      VarId v = input_for(o->literal, ok);
      if (!ok) continue;
      Literal lit{v, o->literal.negated};
      bool dup = false;
      for (Literal prev : m.observations_) {
        if (prev.var != v) continue;
        dup = true;
        if (prev != lit)
          error(o->span, "complementary observations of '" + o->literal.name + "'");
      }
      if (!dup) m.observations_.push_back(lit);
    }
  }

  if (!errors.empty()) return {std::nullopt, std::move(errors)};

  // Derived tables.
  m.plaus_.assign(m.vars_.size(), PlausibilityClass::Plausible);
  for (auto [v, cls] : declared_class) m.plaus_[v] = cls;
  m.obs_sign_.assign(m.vars_.size(), 0);
  for (Literal l : m.observations_) m.obs_sign_[l.var] = l.negated ? -1 : 1;
  m.position_.assign(m.vars_.size(), 0);
  m.goal_index_.assign(m.vars_.size(), -1);
  for (VarId v = 0; v < m.vars_.size(); ++v) {
    switch (m.vars_[v].kind) {
      case VarKind::Input:
        m.position_[v] = static_cast<std::uint32_t>(m.inputs_.size());
        m.inputs_.push_back(v);
        break;
      case VarKind::Action:
        m.position_[v] = static_cast<std::uint32_t>(m.actions_.size());
        m.actions_.push_back(v);
        break;
      case VarKind::Goal:
        break;
    }
  }
  for (std::size_t g = 0; g < m.goals_.size(); ++g)
    m.goal_index_[m.goals_[g].literal.var] = static_cast<std::int32_t>(g);
  m.do_nothing_ = *m.find(kDoNothing);

  return {std::move(m), {}};
}

}  // namespace qdm
