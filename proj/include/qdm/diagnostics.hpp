#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace qdm {

// Position of a token in one source file.  Line and column are 1-based byte
// counts; a zero line marks statements that were built in memory and have no
// source position.
struct SourceSpan {
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::uint32_t length = 0;

  [[nodiscard]] bool known() const { return line != 0; }
  bool operator==(const SourceSpan&) const = default;
};

enum class Severity : std::uint8_t { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;
};

// Renders "file:line:col: error: message".  The position is omitted when the
// statement has none.
inline std::string render(const Diagnostic& d, const std::string& file) {
  std::ostringstream out;
  out << file << ':';
  if (d.span.known()) out << d.span.line << ':' << d.span.column << ':';
  out << ' ' << (d.severity == Severity::Error ? "error" : "warning") << ": "
      << d.message;
  return out.str();
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

}  // namespace qdm
