#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "helpers.hpp"
#include "qdm/analysis.hpp"
#include "qdm/argumentation.hpp"

using qdm::classify_literal;
using qdm::classify_rule;
using qdm::Literal;
using qdm::PlausibilityClass;
using qdm::ReasonStrength;
using qdm::StrengthTable;
using testutil::load_model;
using testutil::names;
using testutil::parse_or_die;

namespace {

ReasonStrength strength_of(const qdm::DecisionModel& m, const char* goal,
                           const char* action) {
  return qdm::reason_strength(m, *m.goal_of(*m.find(goal)), *m.find(action));
}

}  // namespace

TEST_CASE("literal classification folds in statements and observations") {
  auto m = parse_or_die(
      "goal x positive priority 1;\n"
      "rule: do-nothing & p & q & r => x;\n"
      "likely p;\nunlikely q;\nobserve ~r;\nunlikely r;\n");
  auto lit = [&](const char* name, bool neg) {
    return Literal{*m.find(name), neg};
  };
  REQUIRE(classify_literal(m, lit("p", false)) == PlausibilityClass::Likely);
  REQUIRE(classify_literal(m, lit("p", true)) == PlausibilityClass::Unlikely);
  REQUIRE(classify_literal(m, lit("q", false)) == PlausibilityClass::Unlikely);
  REQUIRE(classify_literal(m, lit("q", true)) == PlausibilityClass::Likely);
  // The observation wins over the stated class.
  REQUIRE(classify_literal(m, lit("r", true)) == PlausibilityClass::Likely);
  REQUIRE(classify_literal(m, lit("r", false)) == PlausibilityClass::Unlikely);
}

TEST_CASE("rule classification takes the weakest conjunct") {
  auto m = parse_or_die(
      "action a;\n"
      "goal x positive priority 1;\n"
      "rule: a => x;\n"
      "rule: a & p => x;\n"
      "rule: a & p & q => x;\n"
      "rule: a & lk => x;\n"
      "likely lk;\nunlikely q;\n");
  REQUIRE(classify_rule(m, m.rules()[0]) == PlausibilityClass::Likely);
  REQUIRE(classify_rule(m, m.rules()[1]) == PlausibilityClass::Plausible);
  REQUIRE(classify_rule(m, m.rules()[2]) == PlausibilityClass::Unlikely);
  REQUIRE(classify_rule(m, m.rules()[3]) == PlausibilityClass::Likely);
}

TEST_CASE("umbrella reasons come out as stated in the walkthrough") {
  auto m = load_model("umbrella.qdm");
  REQUIRE(strength_of(m, "newspaper", "go-with-umbrella") ==
          ReasonStrength::Strong);
  REQUIRE(strength_of(m, "newspaper", "go-without-umbrella") ==
          ReasonStrength::Strong);
  REQUIRE(strength_of(m, "newspaper", "do-nothing") == ReasonStrength::Empty);
  REQUIRE(strength_of(m, "wet", "go-without-umbrella") == ReasonStrength::Weak);
  REQUIRE(strength_of(m, "wet", "go-with-umbrella") == ReasonStrength::Empty);
  REQUIRE(strength_of(m, "carry", "go-with-umbrella") ==
          ReasonStrength::Strong);
  REQUIRE(strength_of(m, "carry", "go-without-umbrella") ==
          ReasonStrength::Empty);
  REQUIRE(names(m, qdm::best_actions(m)) ==
          std::vector<std::string>{"go-with-umbrella"});
}

TEST_CASE("unlikely rain reverses the umbrella decision") {
  auto m = load_model("umbrella_unlikely_rain.qdm");
  REQUIRE(strength_of(m, "wet", "go-without-umbrella") ==
          ReasonStrength::Empty);
  REQUIRE(names(m, qdm::best_actions(m)) ==
          std::vector<std::string>{"go-without-umbrella"});
}

TEST_CASE("the dog is avoided until it looks friendly") {
  auto plain = load_model("dog.qdm");
  REQUIRE(strength_of(plain, "get-hurt", "approach") == ReasonStrength::Weak);
  REQUIRE(strength_of(plain, "satisfy-curiosity", "approach") ==
          ReasonStrength::Strong);
  REQUIRE(names(plain, qdm::best_actions(plain)) ==
          std::vector<std::string>{"do-nothing"});

  auto friendly = load_model("dog_unlikely_aggressive.qdm");
  REQUIRE(strength_of(friendly, "get-hurt", "approach") ==
          ReasonStrength::Empty);
  REQUIRE(names(friendly, qdm::best_actions(friendly)) ==
          std::vector<std::string>{"approach"});
}

TEST_CASE("studying beats the beach when passing matters more") {
  auto m = load_model("exam.qdm");
  REQUIRE(names(m, qdm::best_actions(m)) == std::vector<std::string>{"study"});
}

TEST_CASE("conflicting rules weigh in by priority and class") {
  // A likely rule for x is strong only above every live conflicting rule.
  auto dominated = parse_or_die(
      "action a;\n"
      "goal x positive priority 1;\n"
      "rule [1]: a => x;\n"
      "rule [2]: a & p => ~x;\n");
  REQUIRE(strength_of(dominated, "x", "a") == ReasonStrength::Weak);

  auto dominating = parse_or_die(
      "action a;\n"
      "goal x positive priority 1;\n"
      "rule [2]: a => x;\n"
      "rule [1]: a & p => ~x;\n");
  REQUIRE(strength_of(dominating, "x", "a") == ReasonStrength::Strong);

  // A likely conflicting rule of strictly higher priority silences even the
  // weak reading.
  auto silenced = parse_or_die(
      "action a;\n"
      "goal x positive priority 1;\n"
      "rule [1]: a & p => x;\n"
      "rule [2]: a => ~x;\n");
  REQUIRE(strength_of(silenced, "x", "a") == ReasonStrength::Empty);

  // At equal priority a plausible supporter hangs on as weak.
  auto tied = parse_or_die(
      "action a;\n"
      "goal x positive priority 1;\n"
      "rule [2]: a & p => x;\n"
      "rule [2]: a => ~x;\n");
  REQUIRE(strength_of(tied, "x", "a") == ReasonStrength::Weak);
}

TEST_CASE("reason records point at the responsible rules") {
  auto m = load_model("umbrella.qdm");
  StrengthTable t(m);
  const auto& rec =
      t.record(*m.goal_of(*m.find("wet")), *m.find("go-without-umbrella"));
  REQUIRE(rec.supporting == std::vector<std::size_t>{2});
  REQUIRE(rec.opposing.empty());
}

TEST_CASE("unlikely rules leave no trace in the records") {
  auto m = parse_or_die(
      "action a;\n"
      "goal x positive priority 1;\n"
      "rule: a & q => x;\n"
      "unlikely q;\n");
  StrengthTable t(m);
  const auto& rec = t.record(0, *m.find("a"));
  REQUIRE(rec.strength == ReasonStrength::Empty);
  REQUIRE(rec.supporting.empty());
}

TEST_CASE("betterness walks levels top down and stays asymmetric") {
  auto m = load_model("umbrella.qdm");
  auto with = *m.find("go-with-umbrella");
  auto without = *m.find("go-without-umbrella");
  auto idle = *m.find("do-nothing");
  StrengthTable t(m);
  REQUIRE(better(t, with, without));
  REQUIRE_FALSE(better(t, without, with));
  REQUIRE(better(t, with, idle));
  REQUIRE(better(t, without, idle));
  REQUIRE_FALSE(better(t, idle, with));
  REQUIRE_FALSE(better(t, with, with));
  REQUIRE(qdm::deciding_goal(t, with, without) ==
          m.goal_of(*m.find("wet")));
  REQUIRE(qdm::deciding_goal(t, with, idle) ==
          m.goal_of(*m.find("newspaper")));
  REQUIRE_FALSE(qdm::deciding_goal(t, without, with).has_value());
}

TEST_CASE("reasoning by cases is where the procedure underrates an action") {
  auto m = load_model("casepair.qdm");
  REQUIRE(strength_of(m, "win", "alpha") == ReasonStrength::Weak);
  REQUIRE(strength_of(m, "win", "delta") == ReasonStrength::Strong);
  REQUIRE(names(m, qdm::best_actions(m)) == std::vector<std::string>{"delta"});
}

TEST_CASE("linear selection mirrors pairwise betterness step by step") {
  auto m = load_model("umbrella.qdm");
  auto sel = qdm::select_linear(m);
  REQUIRE(sel.has_value());
  REQUIRE(names(m, sel->actions) ==
          std::vector<std::string>{"go-with-umbrella"});
  REQUIRE(sel->steps.size() == 2);  // stops once a single action remains
  REQUIRE(sel->steps[0].priority == 3);
  REQUIRE(names(m, sel->steps[0].eliminated) ==
          std::vector<std::string>{"do-nothing"});
  REQUIRE(sel->steps[1].priority == 2);
  REQUIRE(names(m, sel->steps[1].eliminated) ==
          std::vector<std::string>{"go-without-umbrella"});
}

TEST_CASE("linear selection declines shared priorities") {
  auto m = parse_or_die(
      "action a;\n"
      "goal x positive priority 1;\n"
      "goal y positive priority 1;\n"
      "rule: a => x;\n");
  REQUIRE_FALSE(qdm::select_linear(m).has_value());
}

TEST_CASE("selection and pairwise betterness agree on random linear models") {
  qdm::FuzzLimits limits;
  limits.linear_priorities = true;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    auto m = qdm::random_positive_model(seed, limits);
    auto sel = qdm::select_linear(m);
    REQUIRE(sel.has_value());
    REQUIRE(sel->actions == qdm::best_actions(m));
  }
}

TEST_CASE("betterness is irreflexive and asymmetric on random models") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto m = qdm::random_positive_model(seed);
    StrengthTable t(m);
    for (qdm::VarId a : m.actions()) {
      REQUIRE_FALSE(better(t, a, a));
      for (qdm::VarId b : m.actions())
        if (a != b && better(t, a, b)) REQUIRE_FALSE(better(t, b, a));
    }
    REQUIRE_FALSE(qdm::best_actions(t).empty());
  }
}
