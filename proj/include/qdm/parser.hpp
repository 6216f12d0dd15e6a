#pragma once

#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qdm/model.hpp"

namespace qdm {

struct ParseResult {
  std::optional<DecisionModel> model;
  std::vector<Diagnostic> diagnostics;  // errors and warnings

  [[nodiscard]] bool ok() const { return model.has_value(); }
};

namespace detail {

enum class TokKind : std::uint8_t {
  Ident, Int, KwAction, KwGoal, KwRule, KwPositive, KwNegative, KwPriority,
  KwLikely, KwPlausible, KwUnlikely, KwObserve,
  Semi, Colon, Amp, Tilde, Arrow, LBracket, RBracket, End, Bad,
};

struct Token {
  TokKind kind = TokKind::End;
  std::string_view text;
  long long value = 0;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_trivia();
    Token t;
    t.span = {line_, col_, 1};
    if (pos_ >= src_.size()) {
      t.kind = TokKind::End;
      return t;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_' || src_[pos_] == '-'))
        advance();
      t.text = src_.substr(start, pos_ - start);
      t.span.length = static_cast<std::uint32_t>(pos_ - start);
      t.kind = keyword(t.text);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::size_t start = pos_;
      if (c == '-') advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        advance();
      t.text = src_.substr(start, pos_ - start);
      t.span.length = static_cast<std::uint32_t>(pos_ - start);
      t.kind = TokKind::Int;
      try {
        t.value = std::stoll(std::string(t.text));
      } catch (const std::out_of_range&) {
        t.value = t.text[0] == '-' ? std::numeric_limits<long long>::min()
                                   : std::numeric_limits<long long>::max();
      }
      return t;
    }
    if (c == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      advance();
      advance();
      t.kind = TokKind::Arrow;
      t.span.length = 2;
      t.text = "=>";
      return t;
    }
    advance();
    t.text = src_.substr(pos_ - 1, 1);
    switch (c) {
      case ';': t.kind = TokKind::Semi; break;
      case ':': t.kind = TokKind::Colon; break;
      case '&': t.kind = TokKind::Amp; break;
      case '~': t.kind = TokKind::Tilde; break;
      case '[': t.kind = TokKind::LBracket; break;
      case ']': t.kind = TokKind::RBracket; break;
      default: t.kind = TokKind::Bad; break;
    }
    return t;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  static TokKind keyword(std::string_view s) {
    if (s == "action") return TokKind::KwAction;
    if (s == "goal") return TokKind::KwGoal;
    if (s == "rule") return TokKind::KwRule;
    if (s == "positive") return TokKind::KwPositive;
    if (s == "negative") return TokKind::KwNegative;
    if (s == "priority") return TokKind::KwPriority;
    if (s == "likely") return TokKind::KwLikely;
    if (s == "plausible") return TokKind::KwPlausible;
    if (s == "unlikely") return TokKind::KwUnlikely;
    if (s == "observe") return TokKind::KwObserve;
    return TokKind::Ident;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

// Recursive-descent parser over the statement grammar.  Each malformed
// statement produces one diagnostic and the parser resynchronizes at the next
// semicolon, so a single pass reports every broken statement.
class Parser {
 public:
  Parser(std::string_view src) : lex_(src) { bump(); }

  RawModel parse(std::vector<Diagnostic>& diags) {
    RawModel raw;
    while (cur_.kind != TokKind::End) {
      bool ok = true;
      switch (cur_.kind) {
        case TokKind::KwAction: ok = parse_action(raw); break;
        case TokKind::KwGoal: ok = parse_goal(raw); break;
        case TokKind::KwRule: ok = parse_rule(raw); break;
        case TokKind::KwLikely:
        case TokKind::KwPlausible:
        case TokKind::KwUnlikely: ok = parse_plausibility(raw); break;
        case TokKind::KwObserve: ok = parse_observe(raw); break;
        default:
          fail("expected a statement keyword");
          ok = false;
          break;
      }
      if (!ok) {
        diags_.push_back(*pending_);
        pending_.reset();
        synchronize();
      }
    }
    diags.insert(diags.end(), diags_.begin(), diags_.end());
    return raw;
  }

 private:
  void bump() { cur_ = lex_.next(); }

  bool expect(TokKind k, std::string_view what) {
    if (cur_.kind != k) {
      fail(std::string("expected ") + std::string(what));
      return false;
    }
    bump();
    return true;
  }

  void fail(std::string msg) {
    if (!pending_) pending_ = Diagnostic{Severity::Error, cur_.span, std::move(msg)};
  }

  void synchronize() {
    while (cur_.kind != TokKind::End && cur_.kind != TokKind::Semi) bump();
    if (cur_.kind == TokKind::Semi) bump();
  }

  std::optional<RawLiteral> parse_literal() {
    RawLiteral lit;
    lit.span = cur_.span;
    if (cur_.kind == TokKind::Tilde) {
      lit.negated = true;
      bump();
    }
    if (cur_.kind != TokKind::Ident) {
      fail("expected an identifier");
      return std::nullopt;
    }
    lit.name = std::string(cur_.text);
    if (!lit.negated) lit.span = cur_.span;
    bump();
    return lit;
  }

  bool parse_action(RawModel& raw) {
    ActionDecl decl;
    decl.span = cur_.span;
    bump();
    if (cur_.kind != TokKind::Ident) {
      fail("expected an action name");
      return false;
    }
    decl.name = std::string(cur_.text);
    decl.span = cur_.span;
    bump();
    if (!expect(TokKind::Semi, "';'")) return false;
    raw.statements.emplace_back(std::move(decl));
    return true;
  }

  bool parse_goal(RawModel& raw) {
    GoalDecl decl;
    decl.span = cur_.span;
    bump();
    auto lit = parse_literal();
    if (!lit) return false;
    decl.literal = *lit;
    decl.span = lit->span;
    if (cur_.kind == TokKind::KwPositive) {
      decl.polarity = Polarity::Positive;
    } else if (cur_.kind == TokKind::KwNegative) {
      decl.polarity = Polarity::Negative;
    } else {
      fail("expected 'positive' or 'negative'");
      return false;
    }
    bump();
    if (!expect(TokKind::KwPriority, "'priority'")) return false;
    if (cur_.kind != TokKind::Int) {
      fail("expected a priority value");
      return false;
    }
    decl.priority = cur_.value;
    bump();
    if (!expect(TokKind::Semi, "';'")) return false;
    raw.statements.emplace_back(std::move(decl));
    return true;
  }

  bool parse_rule(RawModel& raw) {
    RuleDecl decl;
    decl.span = cur_.span;
    bump();
    if (cur_.kind == TokKind::LBracket) {
      bump();
      if (cur_.kind != TokKind::Int) {
        fail("expected a rule priority");
        return false;
      }
      decl.priority = cur_.value;
      bump();
      if (!expect(TokKind::RBracket, "']'")) return false;
    }
    if (!expect(TokKind::Colon, "':'")) return false;
    while (true) {
      auto lit = parse_literal();
      if (!lit) return false;
      decl.body.push_back(*lit);
      if (cur_.kind == TokKind::Amp) {
        bump();
        continue;
      }
      break;
    }
    if (!expect(TokKind::Arrow, "'=>'")) return false;
    auto head = parse_literal();
    if (!head) return false;
    decl.head = *head;
    if (!expect(TokKind::Semi, "';'")) return false;
    raw.statements.emplace_back(std::move(decl));
    return true;
  }

  bool parse_plausibility(RawModel& raw) {
    PlausibilityDecl decl;
    decl.span = cur_.span;
    decl.cls = cur_.kind == TokKind::KwLikely     ? PlausibilityClass::Likely
               : cur_.kind == TokKind::KwUnlikely ? PlausibilityClass::Unlikely
                                                  : PlausibilityClass::Plausible;
    bump();
    auto lit = parse_literal();
    if (!lit) return false;
    decl.literal = *lit;
    if (!expect(TokKind::Semi, "';'")) return false;
    raw.statements.emplace_back(std::move(decl));
    return true;
  }

  bool parse_observe(RawModel& raw) {
    ObserveDecl decl;
    decl.span = cur_.span;
    bump();
    auto lit = parse_literal();
    if (!lit) return false;
    decl.literal = *lit;
    if (!expect(TokKind::Semi, "';'")) return false;
    raw.statements.emplace_back(std::move(decl));
    return true;
  }

  Lexer lex_;
  Token cur_;
  std::optional<Diagnostic> pending_;
  std::vector<Diagnostic> diags_;
};

}  // namespace detail

// Parses model text.  Always total: the result carries either a validated
// model (possibly with warnings) or at least one positioned error.
inline ParseResult parse_model(std::string_view source) {
  std::vector<Diagnostic> diags;
  detail::Parser parser(source);
  RawModel raw = parser.parse(diags);
  if (has_errors(diags)) return {std::nullopt, std::move(diags)};
  ValidationResult vr = validate(raw);
  if (!vr.ok()) {
    for (auto& e : vr.errors) diags.push_back(std::move(e));
    return {std::nullopt, std::move(diags)};
  }
  for (const auto& w : vr.model->warnings()) diags.push_back(w);
  return {std::move(vr.model), std::move(diags)};
}

// ---------------------------------------------------------------------------
// Canonical serialization.  parse_model(serialize(m)) reproduces m exactly,
// including variable numbering.  Statements are grouped by kind; plausibility
// defaults are omitted unless a variable would otherwise be registered out of
// order (or not at all), in which case an explicit block pins the order down.

inline std::string serialize(const DecisionModel& m) {
  std::ostringstream out;
  for (VarId a : m.actions()) out << "action " << m.name(a) << ";\n";
  for (const Goal& g : m.goals())
    out << "goal " << m.literal_name(g.literal) << ' '
        << (g.polarity == Polarity::Positive ? "positive" : "negative")
        << " priority " << g.priority << ";\n";

  // Registration order the natural layout would produce on reparse: rule
  // bodies, then plausibility statements, then orphan defaults, then
  // observations.
  std::vector<bool> mentioned(m.variables().size(), false);
  for (const ActionRule& r : m.rules())
    for (Literal l : r.body) mentioned[l.var] = true;
  for (VarId v : m.inputs())
    if (m.plausibility(v) != PlausibilityClass::Plausible) mentioned[v] = true;
  for (Literal l : m.observations()) mentioned[l.var] = true;

  std::vector<VarId> order;
  auto touch = [&](VarId v) {
    for (VarId seen : order)
      if (seen == v) return;
    order.push_back(v);
  };
  for (const ActionRule& r : m.rules())
    for (Literal l : r.body) touch(l.var);
  for (VarId v : m.inputs())
    if (m.plausibility(v) != PlausibilityClass::Plausible) touch(v);
  for (VarId v : m.inputs())
    if (!mentioned[v]) touch(v);  // orphans get a plausible statement
  for (Literal l : m.observations()) touch(l.var);
  bool natural = true;
  for (std::size_t i = 0; i < m.inputs().size(); ++i)
    if (order[i] != m.inputs()[i]) natural = false;

  if (!natural)
    for (VarId v : m.inputs())
      out << to_string(m.plausibility(v)) << ' ' << m.name(v) << ";\n";

  for (const ActionRule& r : m.rules()) {
    out << "rule";
    if (r.priority != 0) out << " [" << r.priority << ']';
    out << ": " << m.name(r.action);
    for (Literal l : r.body) out << " & " << m.literal_name(l);
    out << " => " << m.literal_name(r.head) << ";\n";
  }

  if (natural) {
    for (VarId v : m.inputs())
      if (m.plausibility(v) != PlausibilityClass::Plausible)
        out << to_string(m.plausibility(v)) << ' ' << m.name(v) << ";\n";
    for (VarId v : m.inputs())
      if (!mentioned[v]) out << "plausible " << m.name(v) << ";\n";
  }

  for (Literal l : m.observations())
    out << "observe " << m.literal_name(l) << ";\n";
  return out.str();
}

// FNV-1a over the canonical serialization; stable fingerprint for reports.
inline std::uint64_t digest(const DecisionModel& m) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : serialize(m)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string digest_hex(const DecisionModel& m) {
  static constexpr char hex[] = "0123456789abcdef";
  std::uint64_t h = digest(m);
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return s;
}

}  // namespace qdm
