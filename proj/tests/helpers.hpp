#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdm/diagnostics.hpp"
#include "qdm/model.hpp"
#include "qdm/parser.hpp"

namespace testutil {

inline std::string models_dir() { return QDM_MODELS_DIR; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline qdm::DecisionModel load_model(const std::string& name) {
  auto res = qdm::parse_model(read_file(models_dir() + "/" + name));
  if (!res.ok()) throw std::runtime_error("model failed to parse: " + name);
  return *std::move(res.model);
}

inline qdm::DecisionModel parse_or_die(const std::string& source) {
  auto res = qdm::parse_model(source);
  if (!res.ok()) throw std::runtime_error("inline source failed to parse");
  return *std::move(res.model);
}

inline std::vector<std::string> names(const qdm::DecisionModel& m,
                                      const std::vector<qdm::VarId>& vars) {
  std::vector<std::string> out;
  for (qdm::VarId v : vars) out.push_back(m.name(v));
  return out;
}

inline bool has_error(const std::vector<qdm::Diagnostic>& diags,
                      const std::string& needle) {
  for (const auto& d : diags)
    if (d.severity == qdm::Severity::Error &&
        d.message.find(needle) != std::string::npos)
      return true;
  return false;
}

inline std::vector<qdm::Diagnostic> errors_of(const std::string& source) {
  auto res = qdm::parse_model(source);
  if (res.ok()) throw std::runtime_error("source parsed unexpectedly");
  return res.diagnostics;
}

}  // namespace testutil
