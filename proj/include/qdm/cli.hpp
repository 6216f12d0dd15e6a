#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "qdm/analysis.hpp"
#include "qdm/argumentation.hpp"
#include "qdm/model.hpp"
#include "qdm/parser.hpp"
#include "qdm/report.hpp"
#include "qdm/semantics.hpp"

namespace qdm::cli {

// Exit codes: 0 success, 1 domain finding (a disagreement some subcommand
// exists to surface), 2 usage or input error.

namespace detail {

inline std::optional<DecisionModel> load_model(const std::string& path,
                                               std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot open '" << path << "'\n";
    return std::nullopt;
  }
  std::string source((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
  ParseResult res = parse_model(source);
  for (const Diagnostic& d : res.diagnostics) err << render(d, path) << "\n";
  if (!res.ok()) return std::nullopt;
  return std::move(res.model);
}

inline void emit(const report::ordered_json& doc, std::ostream& out) {
  out << doc.dump(2) << "\n";
}

inline int run_decide(const std::string& file, const std::string& method,
                      bool json, std::ostream& out, std::ostream& err) {
  auto m = load_model(file, err);
  if (!m) return 2;
  report::DecideResult r;
  r.method = method;
  if (method == "reasons" || method == "both") r.reasons = best_actions(*m);
  if (method == "semantics" || method == "both")
    r.semantics = optimal_actions(*m);
  r.agree = !(r.reasons && r.semantics) || *r.reasons == *r.semantics;
  if (json)
    emit(report::decide_json(*m, r), out);
  else
    out << report::decide_text(*m, r);
  return r.agree ? 0 : 1;
}

inline int run_explain(const std::string& file, bool json, std::ostream& out,
                       std::ostream& err) {
  auto m = load_model(file, err);
  if (!m) return 2;
  if (json)
    emit(report::explain_json(*m), out);
  else
    out << report::explain_text(*m);
  return 0;
}

inline int run_kappa(const std::string& file, bool json, std::ostream& out,
                     std::ostream& err) {
  auto m = load_model(file, err);
  if (!m) return 2;
  if (json)
    emit(report::kappa_json(*m), out);
  else
    out << report::kappa_text(*m);
  return 0;
}

inline int run_check(const std::string& file, bool json, std::ostream& out,
                     std::ostream& err) {
  auto m = load_model(file, err);
  if (!m) return 2;
  EquivalenceReport rep = check_equivalence(*m);
  if (json)
    emit(report::check_json(*m, rep), out);
  else
    out << report::check_text(*m, rep);
  return rep.agree ? 0 : 1;
}

inline int run_fuzz(std::uint64_t seed, std::uint64_t count,
                    const FuzzLimits& limits, bool json, std::ostream& out) {
  report::FuzzOutcome f;
  f.first_seed = seed;
  f.count = count;
  f.limits = limits;
  for (std::uint64_t i = 0; i < count; ++i) {
    DecisionModel m = random_positive_model(seed + i, limits);
    EquivalenceReport rep = check_equivalence(m);
    if (rep.agree) {
      ++f.agreements;
      continue;
    }
    report::FuzzDisagreement d;
    d.seed = seed + i;
    d.digest = rep.digest;
    for (VarId a : rep.procedure_best)
      d.reasons.push_back(std::string(m.name(a)));
    for (VarId a : rep.semantic_optimal)
      d.semantics.push_back(std::string(m.name(a)));
    d.model_text = serialize(m);
    f.disagreements.push_back(std::move(d));
  }
  if (json)
    emit(report::fuzz_json(f), out);
  else
    out << report::fuzz_text(f);
  return f.disagreements.empty() ? 0 : 1;
}

inline int run_sensitivity(const std::string& file, bool json,
                           std::ostream& out, std::ostream& err) {
  auto m = load_model(file, err);
  if (!m) return 2;
  SensitivityReport rep = sensitivity_scan(*m);
  if (json)
    emit(report::sensitivity_json(*m, rep), out);
  else
    out << report::sensitivity_text(*m, rep);
  return 0;
}

inline int run_eu(const std::string& file, const EuConfig& cfg, bool json,
                  std::ostream& out, std::ostream& err) {
  auto m = load_model(file, err);
  if (!m) return 2;
  EuReport rep = eu_compare(*m, cfg);
  if (json)
    emit(report::eu_json(*m, rep), out);
  else
    out << report::eu_text(*m, rep);
  return rep.agree ? 0 : 1;
}

}  // namespace detail

// args includes the program name, as in main's argv.
inline int run(std::vector<std::string> args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"qualitative decision models: decide, explain, analyze"};
  app.name(args.empty() ? "qdm" : args[0]);
  app.require_subcommand(1);

  std::string decide_file, decide_method = "both";
  bool decide_as_json = false;
  auto* decide = app.add_subcommand(
      "decide", "compute the best actions by both decision procedures");
  decide->add_option("file", decide_file, "model file")->required();
  decide->add_option("--method", decide_method, "reasons, semantics, or both")
      ->check(CLI::IsMember({"reasons", "semantics", "both"}))
      ->capture_default_str();
  decide->add_flag("--json", decide_as_json, "emit a JSON document");

  std::string explain_file;
  bool explain_as_json = false;
  auto* explain = app.add_subcommand(
      "explain", "show the reasons behind the decision, goal by goal");
  explain->add_option("file", explain_file, "model file")->required();
  explain->add_flag("--json", explain_as_json, "emit a JSON document");

  std::string kappa_file;
  bool kappa_as_json = false;
  auto* kappa = app.add_subcommand(
      "kappa", "dump ranking tables: state ranks, supported goal literals, "
               "per-goal ranks");
  kappa->add_option("file", kappa_file, "model file")->required();
  kappa->add_flag("--json", kappa_as_json, "emit a JSON document");

  std::string check_file;
  bool check_as_json = false;
  auto* check = app.add_subcommand(
      "check", "cross-check the reasons procedure against the ranking "
               "semantics");
  check->add_option("file", check_file, "model file")->required();
  check->add_flag("--json", check_as_json, "emit a JSON document");

  std::uint64_t fuzz_seed = 1, fuzz_count = 1000;
  FuzzLimits limits;
  bool fuzz_as_json = false;
  auto* fuzz = app.add_subcommand(
      "fuzz", "cross-check both procedures on random models");
  fuzz->add_option("--seed", fuzz_seed, "first seed")->capture_default_str();
  fuzz->add_option("--count", fuzz_count, "number of models")
      ->capture_default_str();
  fuzz->add_option("--max-vars", limits.max_input_vars,
                   "input variables per model, at most")
      ->capture_default_str();
  fuzz->add_option("--max-actions", limits.max_actions,
                   "actions per model, at most")
      ->capture_default_str();
  fuzz->add_option("--max-goals", limits.max_goals, "goals per model, at most")
      ->capture_default_str();
  fuzz->add_option("--max-rules", limits.max_rules, "rules per model, at most")
      ->capture_default_str();
  fuzz->add_option("--priority-span", limits.priority_span,
                   "goal priorities drawn from [1, span]")
      ->capture_default_str();
  fuzz->add_option("--max-rule-priority", limits.max_rule_priority,
                   "rule priorities drawn from [0, max]")
      ->capture_default_str();
  fuzz->add_flag("--linear", limits.linear_priorities,
                 "pairwise distinct goal priorities");
  fuzz->add_flag("--observations", limits.with_observations,
                 "observe some input variables");
  fuzz->add_flag("--allow-conflicts", limits.allow_conflicting_heads,
                 "let one action conclude both a goal literal and its "
                 "complement (outside the equivalence guarantee)");
  fuzz->add_flag("--json", fuzz_as_json, "emit a JSON document");

  std::string sensitivity_file;
  bool sensitivity_as_json = false;
  auto* sensitivity = app.add_subcommand(
      "sensitivity", "probe one-step plausibility changes for decision flips");
  sensitivity->add_option("file", sensitivity_file, "model file")->required();
  sensitivity->add_flag("--json", sensitivity_as_json, "emit a JSON document");

  std::string eu_file;
  EuConfig eu_cfg;
  bool eu_as_json = false;
  auto* eu = app.add_subcommand(
      "eu", "compare a numeric expected-utility reading with the qualitative "
            "choice");
  eu->add_option("file", eu_file, "model file")->required();
  eu->add_option("--epsilon", eu_cfg.epsilon,
                 "probability weight per rank of surprise, in (0,1)")
      ->capture_default_str();
  eu->add_option("--base", eu_cfg.base,
                 "utility ratio between priority levels, > 1")
      ->capture_default_str();
  eu->add_option("--delta", eu_cfg.delta,
                 "chance a firing rule still misses, in [0,1)")
      ->capture_default_str();
  eu->add_flag("--json", eu_as_json, "emit a JSON document");

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1),
                                args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(std::move(rest));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << app.help();
    return 2;
  }

  try {
    if (decide->parsed())
      return detail::run_decide(decide_file, decide_method, decide_as_json,
                                out, err);
    if (explain->parsed())
      return detail::run_explain(explain_file, explain_as_json, out, err);
    if (kappa->parsed())
      return detail::run_kappa(kappa_file, kappa_as_json, out, err);
    if (check->parsed())
      return detail::run_check(check_file, check_as_json, out, err);
    if (fuzz->parsed())
      return detail::run_fuzz(fuzz_seed, fuzz_count, limits, fuzz_as_json, out);
    if (sensitivity->parsed())
      return detail::run_sensitivity(sensitivity_file, sensitivity_as_json,
                                     out, err);
    if (eu->parsed()) {
      if (!(eu_cfg.epsilon > 0.0 && eu_cfg.epsilon < 1.0)) {
        err << "error: --epsilon must lie in (0, 1)\n";
        return 2;
      }
      if (!(eu_cfg.base > 1.0)) {
        err << "error: --base must exceed 1\n";
        return 2;
      }
      if (!(eu_cfg.delta >= 0.0 && eu_cfg.delta < 1.0)) {
        err << "error: --delta must lie in [0, 1)\n";
        return 2;
      }
      return detail::run_eu(eu_file, eu_cfg, eu_as_json, out, err);
    }
  } catch (const EnumerationCapError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand given\n" << app.help();
  return 2;
}

}  // namespace qdm::cli
