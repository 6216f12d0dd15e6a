// Acceptance gate: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qdm/analysis.hpp"
#include "qdm/cli.hpp"
#include "qdm/report.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

int failures = 0;

void criterion(int n, const std::string& label,
               const std::function<bool(std::string&)>& body) {
  std::string note;
  bool ok = false;
  try {
    ok = body(note);
  } catch (const std::exception& e) {
    note = e.what();
  }
  std::cout << (ok ? "PASS" : "FAIL") << " " << n << ": " << label;
  if (!ok && !note.empty()) std::cout << " (" << note << ")";
  std::cout << "\n";
  if (!ok) ++failures;
}

std::vector<std::string> best_names(const qdm::DecisionModel& m) {
  return testutil::names(m, qdm::best_actions(m));
}

std::vector<std::string> optimal_names(const qdm::DecisionModel& m) {
  return testutil::names(m, qdm::optimal_actions(m));
}

bool both_pick(const qdm::DecisionModel& m, const std::string& action,
               std::string& note) {
  std::vector<std::string> want{action};
  if (best_names(m) != want) {
    note = "reasons picked something else";
    return false;
  }
  if (optimal_names(m) != want) {
    note = "semantics picked something else";
    return false;
  }
  return true;
}

std::string goal_name(const qdm::DecisionModel& m, std::size_t g) {
  return std::string(m.name(m.goals()[g].literal.var));
}

bool round_trips(const qdm::DecisionModel& m, std::string& note) {
  std::string text = qdm::serialize(m);
  qdm::ParseResult res = qdm::parse_model(text);
  if (!res.ok()) {
    note = "serialized form failed to parse";
    return false;
  }
  if (!(*res.model == m)) {
    note = "reparsed model differs";
    return false;
  }
  if (qdm::digest_hex(*res.model) != qdm::digest_hex(m)) {
    note = "digest differs";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  criterion(1, "umbrella model decides and ranks correctly in under 10 ms",
            [](std::string& note) {
              auto m = testutil::load_model("umbrella.qdm");
              auto start = Clock::now();
              auto best = best_names(m);
              qdm::SemanticsTable t(m);
              auto optimal = testutil::names(m, qdm::optimal_actions(t));
              auto row = [&](const char* a) {
                return qdm::to_string(qdm::rank_vector(t, *m.find(a)));
              };
              std::string with = row("go-with-umbrella");
              std::string without = row("go-without-umbrella");
              std::string idle = row("do-nothing");
              double ms = ms_since(start);
              std::vector<std::string> want{"go-with-umbrella"};
              if (best != want || optimal != want) {
                note = "wrong decision";
                return false;
              }
              if (with != "<+1, +1, -1>" || without != "<+1, 0, +1>" ||
                  idle != "<-1, +1, +1>") {
                note = "wrong rank vectors";
                return false;
              }
              if (ms >= 10.0) {
                note = "took " + std::to_string(ms) + " ms";
                return false;
              }
              return true;
            });

  criterion(2, "unlikely rain reverses the umbrella decision in both views",
            [](std::string& note) {
              auto m = testutil::load_model("umbrella_unlikely_rain.qdm");
              return both_pick(m, "go-without-umbrella", note);
            });

  criterion(3, "dog model avoids, then approaches; explanation blames get-hurt",
            [](std::string& note) {
              auto wary = testutil::load_model("dog.qdm");
              if (!both_pick(wary, "do-nothing", note)) return false;
              auto bold = testutil::load_model("dog_unlikely_aggressive.qdm");
              if (!both_pick(bold, "approach", note)) return false;
              std::string text = qdm::report::explain_text(wary);
              if (text.find("decisive goal: get-hurt") == std::string::npos) {
                note = "explanation does not name get-hurt";
                return false;
              }
              return true;
            });

  criterion(4, "treatment decisions, their justifications, and the critical "
               "assumption",
            [](std::string& note) {
              auto plain = testutil::load_model("treatment.qdm");
              if (!both_pick(plain, "treatment", note)) return false;
              auto j = qdm::justifying_goal(plain, *plain.find("treatment"),
                                            *plain.find("do-nothing"));
              if (!j || goal_name(plain, *j) != "death") {
                note = "treatment not justified by death";
                return false;
              }
              auto doubted =
                  testutil::load_model("treatment_unlikely_effective.qdm");
              if (!both_pick(doubted, "do-nothing", note)) return false;
              auto jd = qdm::justifying_goal(doubted, *doubted.find("do-nothing"),
                                             *doubted.find("treatment"));
              if (!jd || goal_name(doubted, *jd) != "side-effects") {
                note = "caution not justified by side-effects";
                return false;
              }
              auto rep = qdm::sensitivity_scan(doubted);
              if (!rep.any_critical) {
                note = "no critical parameter found";
                return false;
              }
              for (const auto& p : rep.perturbations)
                if (p.critical && doubted.name(p.variable) != "effective") {
                  note = "wrong critical parameter";
                  return false;
                }
              return true;
            });

  criterion(5, "10000 random positive models agree; the case-split model "
               "does not",
            [](std::string& note) {
              auto start = Clock::now();
              for (std::uint64_t i = 1; i <= 10000; ++i) {
                qdm::FuzzLimits lim;
                lim.linear_priorities = (i % 2) == 1;
                lim.with_observations = (i % 3) == 0;
                auto rep =
                    qdm::check_equivalence(qdm::random_positive_model(i, lim));
                if (!rep.agree) {
                  note = "disagreement at seed " + std::to_string(i);
                  return false;
                }
              }
              auto split = qdm::check_equivalence(
                  testutil::load_model("casepair.qdm"));
              if (split.agree) {
                note = "case-split model unexpectedly agrees";
                return false;
              }
              std::ostringstream out, err;
              int code = qdm::cli::run(
                  {"qdm", "check", testutil::models_dir() + "/casepair.qdm"},
                  out, err);
              if (code != 1) {
                note = "check exit code " + std::to_string(code);
                return false;
              }
              double secs = ms_since(start) / 1000.0;
              if (secs >= 60.0) {
                note = "took " + std::to_string(secs) + " s";
                return false;
              }
              return true;
            });

  criterion(6, "5000 linear models: stepwise selection equals pairwise best",
            [](std::string& note) {
              qdm::FuzzLimits lim;
              lim.linear_priorities = true;
              for (std::uint64_t i = 1; i <= 5000; ++i) {
                auto m = qdm::random_positive_model(i, lim);
                auto sel = qdm::select_linear(m);
                if (!sel) {
                  note = "selection refused seed " + std::to_string(i);
                  return false;
                }
                if (sel->actions != qdm::best_actions(m)) {
                  note = "mismatch at seed " + std::to_string(i);
                  return false;
                }
              }
              return true;
            });

  criterion(7, "ranking axioms hold across fuzzed models",
            [](std::string& note) {
              qdm::FuzzLimits lim;
              lim.with_observations = true;
              for (std::uint64_t i = 1; i <= 300; ++i) {
                auto m = qdm::random_positive_model(i, lim);
                auto states = qdm::enumerate_input_states(m);
                qdm::KappaValue low = qdm::KappaValue::infinity();
                for (const auto& s : states)
                  if (qdm::state_satisfies_observations(m, s))
                    low = qdm::KappaValue::min(low, qdm::kappa_posterior(m, s));
                if (!(low == qdm::KappaValue(0))) {
                  note = "posterior floor not zero at seed " +
                         std::to_string(i);
                  return false;
                }
                for (qdm::VarId a : m.actions())
                  for (const qdm::Goal& g : m.goals())
                    for (const auto& s : states) {
                      auto pro = qdm::kappa_conditional(m, a, g.literal, s);
                      auto con = qdm::kappa_conditional(
                          m, a, g.literal.complement(), s);
                      for (auto k : {pro, con})
                        if (!(k == qdm::KappaValue(0) ||
                              k == qdm::KappaValue(1))) {
                          note = "conditional outside {0,1} at seed " +
                                 std::to_string(i);
                          return false;
                        }
                      bool sup_pro = qdm::supports(m, a, s, g.literal);
                      bool sup_con =
                          qdm::supports(m, a, s, g.literal.complement());
                      if (!sup_pro && !sup_con &&
                          !(pro == qdm::KappaValue(1) &&
                            con == qdm::KappaValue(0))) {
                        note = "unsupported goal not defaulted to false at "
                               "seed " + std::to_string(i);
                        return false;
                      }
                    }
              }
              return true;
            });

  criterion(8, "parsing a serialized model reproduces it exactly",
            [](std::string& note) {
              for (const char* file :
                   {"umbrella.qdm", "umbrella_unlikely_rain.qdm", "dog.qdm",
                    "dog_unlikely_aggressive.qdm", "exam.qdm", "treatment.qdm",
                    "treatment_unlikely_effective.qdm", "casepair.qdm"}) {
                if (!round_trips(testutil::load_model(file), note)) {
                  note += std::string(" [") + file + "]";
                  return false;
                }
              }
              for (std::uint64_t i = 1; i <= 2000; ++i) {
                qdm::FuzzLimits lim;
                lim.with_observations = (i % 2) == 0;
                lim.allow_conflicting_heads = (i % 5) == 0;
                lim.linear_priorities = (i % 3) == 0;
                if (!round_trips(qdm::random_positive_model(i, lim), note)) {
                  note += " [seed " + std::to_string(i) + "]";
                  return false;
                }
              }
              return true;
            });

  criterion(9, "numeric comparator agrees except when magnitudes overwhelm "
               "ranks",
            [](std::string& note) {
              for (const char* file :
                   {"umbrella.qdm", "umbrella_unlikely_rain.qdm", "dog.qdm",
                    "dog_unlikely_aggressive.qdm", "exam.qdm",
                    "treatment.qdm"}) {
                auto rep = qdm::eu_compare(testutil::load_model(file));
                if (!rep.agree) {
                  note = std::string("unexpected split on ") + file;
                  return false;
                }
              }
              auto doubted =
                  testutil::load_model("treatment_unlikely_effective.qdm");
              auto rep = qdm::eu_compare(doubted);
              if (rep.agree) {
                note = "expected a split on doubted effectiveness";
                return false;
              }
              if (testutil::names(doubted, rep.eu_optimal) !=
                      std::vector<std::string>{"treatment"} ||
                  testutil::names(doubted, rep.qualitative) !=
                      std::vector<std::string>{"do-nothing"}) {
                note = "split went the wrong way";
                return false;
              }
              return true;
            });

  criterion(10, "a 50-action, 20-goal, 500-rule model is decided in under "
                "100 ms",
            [](std::string& note) {
              qdm::RawModel raw;
              std::mt19937_64 rng(42);
              std::vector<std::string> inputs, actions, goals;
              for (int i = 1; i <= 10; ++i)
                inputs.push_back("s" + std::to_string(i));
              for (int i = 1; i <= 50; ++i) {
                actions.push_back("act" + std::to_string(i));
                raw.statements.push_back(qdm::ActionDecl{actions.back(), {}});
              }
              for (int i = 1; i <= 20; ++i) {
                goals.push_back("out" + std::to_string(i));
                raw.statements.push_back(qdm::GoalDecl{
                    qdm::RawLiteral{goals.back(), false, {}},
                    (i % 3) ? qdm::Polarity::Positive : qdm::Polarity::Negative,
                    i, {}});
              }
              for (int i = 0; i < 500; ++i) {
                qdm::RuleDecl rule;
                rule.head = qdm::RawLiteral{goals[rng() % goals.size()], false,
                                            {}};
                rule.priority = static_cast<long long>(rng() % 4);
                rule.body.push_back(
                    qdm::RawLiteral{actions[rng() % actions.size()], false, {}});
                for (const std::string& in : inputs)
                  if (rng() % 4 == 0)
                    rule.body.push_back(qdm::RawLiteral{in, false, {}});
                raw.statements.push_back(std::move(rule));
              }
              for (std::size_t i = 0; i < inputs.size(); ++i) {
                if (i % 3 == 2) continue;
                raw.statements.push_back(qdm::PlausibilityDecl{
                    qdm::RawLiteral{inputs[i], false, {}},
                    i % 3 ? qdm::PlausibilityClass::Unlikely
                          : qdm::PlausibilityClass::Likely,
                    {}});
              }
              auto res = qdm::validate(raw);
              if (!res.ok()) {
                note = "scale model failed validation";
                return false;
              }
              auto start = Clock::now();
              qdm::StrengthTable t(*res.model);
              auto best = qdm::best_actions(t);
              double ms = ms_since(start);
              if (best.empty()) {
                note = "no best action";
                return false;
              }
              if (ms >= 100.0) {
                note = "took " + std::to_string(ms) + " ms";
                return false;
              }
              return true;
            });

  if (failures == 0) {
    std::cout << "all criteria passed\n";
    return 0;
  }
  std::cout << failures << " criterion(s) failed\n";
  return 1;
}
