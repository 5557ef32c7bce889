#include "cafcoal/formats.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cafcoal {

std::string_view to_string(DiagCode code) {
  switch (code) {
    case DiagCode::SyntaxError: return "SyntaxError";
    case DiagCode::EmptyInput: return "EmptyInput";
    case DiagCode::EmptyFramework: return "EmptyFramework";
    case DiagCode::UndeclaredArgument: return "UndeclaredArgument";
    case DiagCode::DuplicateFact: return "DuplicateFact";
    case DiagCode::DuplicateDeclaration: return "DuplicateDeclaration";
    case DiagCode::DuplicateAttack: return "DuplicateAttack";
    case DiagCode::MissingSeparator: return "MissingSeparator";
    case DiagCode::PartOverlap: return "PartOverlap";
    case DiagCode::IllegalUncertainControlAttack:
      return "IllegalUncertainControlAttack";
    case DiagCode::ReflexiveSymmetricAttack: return "ReflexiveSymmetricAttack";
    case DiagCode::NonTotalTransition: return "NonTotalTransition";
    case DiagCode::NondeterministicTransition:
      return "NondeterministicTransition";
    case DiagCode::ArityMismatch: return "ArityMismatch";
    case DiagCode::UnknownCafIndex: return "UnknownCafIndex";
    case DiagCode::MoveOutOfRange: return "MoveOutOfRange";
    case DiagCode::UnknownState: return "UnknownState";
    case DiagCode::UnknownAgent: return "UnknownAgent";
    case DiagCode::MissingInit: return "MissingInit";
    case DiagCode::DuplicateInit: return "DuplicateInit";
    case DiagCode::CafLoadFailed: return "CafLoadFailed";
    case DiagCode::MissingCafZero: return "MissingCafZero";
    case DiagCode::ThetaDefaulted: return "ThetaDefaulted";
    case DiagCode::UpsilonDefaulted: return "UpsilonDefaulted";
  }
  return "?";
}

std::string format_diagnostic(const ParseDiagnostic& diag, bool color) {
  const char* severity =
      diag.severity == DiagSeverity::Error ? "error" : "warning";
  std::string out = diag.location.file + ":" +
                    std::to_string(diag.location.line) + ":" +
                    std::to_string(diag.location.column) + ": ";
  if (color) {
    out += diag.severity == DiagSeverity::Error ? "\033[31m" : "\033[33m";
    out += severity;
    out += "\033[0m";
  } else {
    out += severity;
  }
  out += ": ";
  out += diag.message;
  return out;
}

namespace {

bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

class Diags {
 public:
  explicit Diags(std::string file) : file_(std::move(file)) {}

  void add(DiagSeverity severity, DiagCode code, std::string message,
           std::uint32_t line, std::uint32_t column) {
    list_.push_back({severity, code, std::move(message),
                     SourceLocation{file_, line, column}});
  }
  void error(DiagCode code, std::string message, std::uint32_t line,
             std::uint32_t column) {
    add(DiagSeverity::Error, code, std::move(message), line, column);
  }
  void warning(DiagCode code, std::string message, std::uint32_t line,
               std::uint32_t column) {
    add(DiagSeverity::Warning, code, std::move(message), line, column);
  }
  bool has_errors() const {
    for (const auto& d : list_)
      if (d.severity == DiagSeverity::Error) return true;
    return false;
  }
  std::vector<ParseDiagnostic> take() { return std::move(list_); }
  void splice(std::vector<ParseDiagnostic> other) {
    for (auto& d : other) list_.push_back(std::move(d));
  }
  const std::string& file() const { return file_; }

 private:
  std::string file_;
  std::vector<ParseDiagnostic> list_;
};

// ---------------------------------------------------------------------------
// Fact syntax shared by the apx, caf and catl formats: facts are
//   predicate(arg, ..., arg).
// where an arg is an identifier, a nonnegative integer, a quoted string or
// a parenthesized tuple of args. '%' starts a comment running to the end of
// the line; whitespace is otherwise insignificant.

struct Token {
  enum Type { Ident, Int, Str, LParen, RParen, Comma, Dot, End } type = End;
  std::string text;
  std::uint32_t line = 1, column = 1;
};

class FactLexer {
 public:
  FactLexer(std::string_view text, Diags& diags)
      : text_(text), diags_(diags) {}

  Token next() {
    for (;;) {
      skip_space_and_comments();
      if (pos_ >= text_.size()) return make(Token::End, "");
      char c = text_[pos_];
      if (static_cast<unsigned char>(c) > 127) {
        diags_.error(DiagCode::SyntaxError, "non-ASCII byte in input", line_,
                     column_);
        advance();
        continue;
      }
      if (ident_start(c)) {
        Token t = make(Token::Ident, "");
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
          t.text += text_[pos_];
          advance();
        }
        return t;
      }
      if (c >= '0' && c <= '9') {
        Token t = make(Token::Int, "");
        while (pos_ < text_.size() && text_[pos_] >= '0' &&
               text_[pos_] <= '9') {
          t.text += text_[pos_];
          advance();
        }
        if (pos_ < text_.size() && ident_start(text_[pos_])) {
          diags_.error(DiagCode::SyntaxError,
                       "identifiers may not start with a digit", t.line,
                       t.column);
          while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
        }
        return t;
      }
      if (c == '"') {
        Token t = make(Token::Str, "");
        advance();
        while (pos_ < text_.size() && text_[pos_] != '"' &&
               text_[pos_] != '\n') {
          t.text += text_[pos_];
          advance();
        }
        if (pos_ >= text_.size() || text_[pos_] != '"') {
          diags_.error(DiagCode::SyntaxError, "unterminated string", t.line,
                       t.column);
          return t;
        }
        advance();
        return t;
      }
      switch (c) {
        case '(': { Token t = make(Token::LParen, "("); advance(); return t; }
        case ')': { Token t = make(Token::RParen, ")"); advance(); return t; }
        case ',': { Token t = make(Token::Comma, ","); advance(); return t; }
        case '.': { Token t = make(Token::Dot, "."); advance(); return t; }
        default:
          diags_.error(DiagCode::SyntaxError,
                       std::string("unexpected character '") + c + "'", line_,
                       column_);
          advance();
      }
    }
  }

 private:
  Token make(Token::Type type, std::string text) {
    Token t;
    t.type = type;
    t.text = std::move(text);
    t.line = line_;
    t.column = column_;
    return t;
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1, column_ = 1;
  Diags& diags_;
};

struct FactArg {
  enum Kind { Ident, Int, Str, Tuple } kind = Ident;
  std::string text;
  long long value = 0;
  std::vector<FactArg> tuple;
  std::uint32_t line = 1, column = 1;
};

struct Fact {
  std::string predicate;
  std::vector<FactArg> args;
  std::uint32_t line = 1, column = 1;
};

class FactParser {
 public:
  FactParser(std::string_view text, Diags& diags)
      : lexer_(text, diags), diags_(diags) {
    shift();
  }

  std::vector<Fact> parse_all() {
    std::vector<Fact> facts;
    while (current_.type != Token::End) {
      if (current_.type != Token::Ident) {
        diags_.error(DiagCode::SyntaxError,
                     "expected a predicate name", current_.line,
                     current_.column);
        recover();
        continue;
      }
      Fact fact;
      fact.predicate = current_.text;
      fact.line = current_.line;
      fact.column = current_.column;
      shift();
      if (!expect(Token::LParen, "'('")) {
        recover();
        continue;
      }
      bool bad = false;
      for (;;) {
        auto arg = parse_arg();
        if (!arg) {
          bad = true;
          break;
        }
        fact.args.push_back(std::move(*arg));
        if (current_.type == Token::Comma) {
          shift();
          continue;
        }
        break;
      }
      if (bad || !expect(Token::RParen, "')'") ||
          !expect(Token::Dot, "'.'")) {
        recover();
        continue;
      }
      facts.push_back(std::move(fact));
    }
    return facts;
  }

 private:
  std::optional<FactArg> parse_arg() {
    FactArg arg;
    arg.line = current_.line;
    arg.column = current_.column;
    switch (current_.type) {
      case Token::Ident:
        arg.kind = FactArg::Ident;
        arg.text = current_.text;
        shift();
        return arg;
      case Token::Int:
        arg.kind = FactArg::Int;
        arg.text = current_.text;
        arg.value = current_.text.size() > 18 ? -1 : std::stoll(current_.text);
        shift();
        return arg;
      case Token::Str:
        arg.kind = FactArg::Str;
        arg.text = current_.text;
        shift();
        return arg;
      case Token::LParen: {
        arg.kind = FactArg::Tuple;
        shift();
        for (;;) {
          auto inner = parse_arg();
          if (!inner) return std::nullopt;
          arg.tuple.push_back(std::move(*inner));
          if (current_.type == Token::Comma) {
            shift();
            continue;
          }
          break;
        }
        if (!expect(Token::RParen, "')'")) return std::nullopt;
        return arg;
      }
      default:
        diags_.error(DiagCode::SyntaxError, "expected a fact argument",
                     current_.line, current_.column);
        return std::nullopt;
    }
  }

  bool expect(Token::Type type, const char* what) {
    if (current_.type != type) {
      diags_.error(DiagCode::SyntaxError,
                   std::string("expected ") + what, current_.line,
                   current_.column);
      return false;
    }
    shift();
    return true;
  }

  // Skip to just past the next '.' so later facts still get parsed.
  void recover() {
    while (current_.type != Token::Dot && current_.type != Token::End) shift();
    if (current_.type == Token::Dot) shift();
  }

  void shift() { current_ = lexer_.next(); }

  FactLexer lexer_;
  Diags& diags_;
  Token current_;
};

bool check_shape(Diags& diags, const Fact& fact,
                 std::initializer_list<FactArg::Kind> shape) {
  if (fact.args.size() != shape.size()) {
    diags.error(DiagCode::SyntaxError,
                fact.predicate + " takes " + std::to_string(shape.size()) +
                    " argument(s)",
                fact.line, fact.column);
    return false;
  }
  std::size_t i = 0;
  for (FactArg::Kind kind : shape) {
    if (fact.args[i].kind != kind) {
      const char* want = kind == FactArg::Ident   ? "an identifier"
                         : kind == FactArg::Int   ? "a number"
                         : kind == FactArg::Str   ? "a quoted string"
                                                  : "a tuple";
      diags.error(DiagCode::SyntaxError,
                  "argument " + std::to_string(i + 1) + " of " +
                      fact.predicate + " must be " + want,
                  fact.args[i].line, fact.args[i].column);
      return false;
    }
    ++i;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// apx

ParseResult<ArgumentationFramework> parse_apx(std::string_view text,
                                              std::string file_name) {
  Diags diags(std::move(file_name));
  auto facts = FactParser(text, diags).parse_all();

  ArgumentationFramework af;
  for (const auto& fact : facts) {
    if (fact.predicate != "arg") continue;
    if (!check_shape(diags, fact, {FactArg::Ident})) continue;
    if (af.index_of(fact.args[0].text)) {
      diags.warning(DiagCode::DuplicateFact,
                    "argument '" + fact.args[0].text + "' declared twice",
                    fact.line, fact.column);
      continue;
    }
    af.add_argument(fact.args[0].text);
  }
  for (const auto& fact : facts) {
    if (fact.predicate == "arg") continue;
    if (fact.predicate != "att") {
      diags.error(DiagCode::SyntaxError,
                  "unknown predicate '" + fact.predicate + "'", fact.line,
                  fact.column);
      continue;
    }
    if (!check_shape(diags, fact, {FactArg::Ident, FactArg::Ident})) continue;
    auto src = af.index_of(fact.args[0].text);
    auto dst = af.index_of(fact.args[1].text);
    if (!src || !dst) {
      diags.error(DiagCode::UndeclaredArgument,
                  "attack references undeclared argument '" +
                      (src ? fact.args[1].text : fact.args[0].text) + "'",
                  fact.line, fact.column);
      continue;
    }
    if (af.has_attack(*src, *dst)) {
      diags.warning(DiagCode::DuplicateFact,
                    "attack declared twice", fact.line, fact.column);
      continue;
    }
    af.add_attack(*src, *dst);
  }
  if (!diags.has_errors() && af.argument_count() == 0)
    diags.error(DiagCode::EmptyFramework, "input declares no arguments", 1, 1);

  ParseResult<ArgumentationFramework> result;
  bool ok = !diags.has_errors();
  result.diagnostics = diags.take();
  if (ok) result.value = std::move(af);
  return result;
}

std::string serialize_apx(const ArgumentationFramework& af) {
  std::vector<std::string> args = af.argument_names();
  std::sort(args.begin(), args.end());
  std::vector<std::pair<std::string, std::string>> atts;
  for (const auto& [s, d] : af.attacks())
    atts.emplace_back(af.argument_name(s), af.argument_name(d));
  std::sort(atts.begin(), atts.end());
  std::string out;
  for (const auto& a : args) out += "arg(" + a + ").\n";
  for (const auto& [s, d] : atts) out += "att(" + s + "," + d + ").\n";
  return out;
}

// ---------------------------------------------------------------------------
// tgf

ParseResult<ArgumentationFramework> parse_tgf(std::string_view text,
                                              std::string file_name) {
  Diags diags(std::move(file_name));
  ArgumentationFramework af;
  bool separator_seen = false;
  std::uint32_t line_no = 0;
  std::size_t pos = 0;

  auto valid_ident = [&](const std::string& token, std::uint32_t col) {
    if (!ident_start(token[0])) {
      diags.error(DiagCode::SyntaxError,
                  "'" + token + "' is not a valid identifier", line_no, col);
      return false;
    }
    for (char c : token)
      if (!ident_char(c)) {
        diags.error(DiagCode::SyntaxError,
                    "'" + token + "' is not a valid identifier", line_no, col);
        return false;
      }
    return true;
  };

  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line(text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos));
    ++line_no;

    bool non_ascii = false;
    for (char c : line)
      if (static_cast<unsigned char>(c) > 127) non_ascii = true;
    if (non_ascii) {
      diags.error(DiagCode::SyntaxError, "non-ASCII byte in input", line_no, 1);
    } else {
      // Tokenize on blanks, remembering 1-based columns.
      std::vector<std::pair<std::string, std::uint32_t>> tokens;
      for (std::size_t i = 0; i < line.size();) {
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
          ++i;
          continue;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
               line[i] != '\r')
          ++i;
        tokens.emplace_back(line.substr(start, i - start),
                            static_cast<std::uint32_t>(start + 1));
      }
      if (!tokens.empty()) {
        if (tokens.size() == 1 && tokens[0].first == "#") {
          if (separator_seen)
            diags.error(DiagCode::SyntaxError, "duplicate '#' separator",
                        line_no, tokens[0].second);
          separator_seen = true;
        } else if (!separator_seen) {
          if (tokens.size() != 1) {
            diags.error(DiagCode::SyntaxError,
                        "node lines hold exactly one identifier", line_no,
                        tokens[1].second);
          } else if (valid_ident(tokens[0].first, tokens[0].second)) {
            if (af.index_of(tokens[0].first))
              diags.warning(DiagCode::DuplicateFact,
                            "node '" + tokens[0].first + "' declared twice",
                            line_no, tokens[0].second);
            else
              af.add_argument(tokens[0].first);
          }
        } else {
          if (tokens.size() != 2) {
            diags.error(DiagCode::SyntaxError,
                        "edge lines hold exactly two identifiers", line_no,
                        tokens[0].second);
          } else if (valid_ident(tokens[0].first, tokens[0].second) &&
                     valid_ident(tokens[1].first, tokens[1].second)) {
            auto src = af.index_of(tokens[0].first);
            auto dst = af.index_of(tokens[1].first);
            if (!src || !dst) {
              diags.error(DiagCode::UndeclaredArgument,
                          "edge references undeclared node '" +
                              (src ? tokens[1].first : tokens[0].first) + "'",
                          line_no, tokens[0].second);
            } else if (af.has_attack(*src, *dst)) {
              diags.warning(DiagCode::DuplicateFact, "edge declared twice",
                            line_no, tokens[0].second);
            } else {
              af.add_attack(*src, *dst);
            }
          }
        }
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }

  if (!separator_seen)
    diags.error(DiagCode::MissingSeparator, "no '#' separator line", line_no,
                1);
  if (!diags.has_errors() && af.argument_count() == 0)
    diags.error(DiagCode::EmptyFramework, "input declares no nodes", 1, 1);

  ParseResult<ArgumentationFramework> result;
  bool ok = !diags.has_errors();
  result.diagnostics = diags.take();
  if (ok) result.value = std::move(af);
  return result;
}

std::string serialize_tgf(const ArgumentationFramework& af) {
  std::vector<std::string> args = af.argument_names();
  std::sort(args.begin(), args.end());
  std::vector<std::pair<std::string, std::string>> atts;
  for (const auto& [s, d] : af.attacks())
    atts.emplace_back(af.argument_name(s), af.argument_name(d));
  std::sort(atts.begin(), atts.end());
  std::string out;
  for (const auto& a : args) out += a + "\n";
  out += "#\n";
  for (const auto& [s, d] : atts) out += s + " " + d + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// caf

ParseResult<ControlFramework> parse_caf(std::string_view text,
                                        std::string file_name) {
  Diags diags(std::move(file_name));
  auto facts = FactParser(text, diags).parse_all();

  ControlFramework caf;
  for (const auto& fact : facts) {
    ControlFramework::Part part;
    if (fact.predicate == "farg") part = ControlFramework::Part::Fixed;
    else if (fact.predicate == "uarg") part = ControlFramework::Part::Uncertain;
    else if (fact.predicate == "carg") part = ControlFramework::Part::Control;
    else continue;
    if (!check_shape(diags, fact, {FactArg::Ident})) continue;
    auto existing = caf.index_of(fact.args[0].text);
    if (existing && caf.part(*existing) == part) {
      diags.warning(DiagCode::DuplicateFact,
                    "argument '" + fact.args[0].text + "' declared twice",
                    fact.line, fact.column);
      continue;
    }
    try {
      caf.add_argument(fact.args[0].text, part);
    } catch (const PartOverlap& e) {
      diags.error(DiagCode::PartOverlap, e.what(), fact.line, fact.column);
    }
  }

  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& fact : facts) {
    bool is_att = fact.predicate == "att";
    bool is_uatt = fact.predicate == "uatt";
    bool is_satt = fact.predicate == "satt";
    if (!is_att && !is_uatt && !is_satt) {
      if (fact.predicate != "farg" && fact.predicate != "uarg" &&
          fact.predicate != "carg")
        diags.error(DiagCode::SyntaxError,
                    "unknown predicate '" + fact.predicate + "'", fact.line,
                    fact.column);
      continue;
    }
    if (!check_shape(diags, fact, {FactArg::Ident, FactArg::Ident})) continue;
    const std::string& src = fact.args[0].text;
    const std::string& dst = fact.args[1].text;
    if (!seen.insert({fact.predicate, src, dst}).second) {
      diags.warning(DiagCode::DuplicateFact, "attack declared twice",
                    fact.line, fact.column);
      continue;
    }
    try {
      if (is_att) {
        caf.add_attack_classified(src, dst);
      } else if (is_uatt) {
        caf.add_uncertain_attack(src, dst);
      } else if (!caf.add_symmetric_attack(src, dst)) {
        diags.warning(DiagCode::DuplicateFact,
                      "symmetric attack between '" + src + "' and '" + dst +
                          "' already declared",
                      fact.line, fact.column);
      }
    } catch (const UndeclaredArgument& e) {
      diags.error(DiagCode::UndeclaredArgument, e.what(), fact.line,
                  fact.column);
    } catch (const IllegalUncertainControlAttack& e) {
      diags.error(DiagCode::IllegalUncertainControlAttack, e.what(), fact.line,
                  fact.column);
    } catch (const ReflexiveSymmetricAttack& e) {
      diags.error(DiagCode::ReflexiveSymmetricAttack, e.what(), fact.line,
                  fact.column);
    } catch (const DuplicateAttack& e) {
      diags.error(DiagCode::DuplicateAttack, e.what(), fact.line, fact.column);
    }
  }
  if (!diags.has_errors() && caf.argument_count() == 0)
    diags.error(DiagCode::EmptyFramework, "input declares no arguments", 1, 1);

  ParseResult<ControlFramework> result;
  bool ok = !diags.has_errors();
  result.diagnostics = diags.take();
  if (ok) result.value = std::move(caf);
  return result;
}

std::string serialize_caf(const ControlFramework& caf) {
  auto names_of = [&](const std::vector<std::size_t>& part) {
    std::vector<std::string> out;
    for (std::size_t i : part) out.push_back(caf.argument_name(i));
    std::sort(out.begin(), out.end());
    return out;
  };
  std::string out;
  for (const auto& a : names_of(caf.fixed_arguments()))
    out += "farg(" + a + ").\n";
  for (const auto& a : names_of(caf.uncertain_arguments()))
    out += "uarg(" + a + ").\n";
  for (const auto& a : names_of(caf.control_arguments()))
    out += "carg(" + a + ").\n";

  auto name_pairs = [&](const std::vector<ControlFramework::Attack>& attacks,
                        bool canonical_order) {
    std::vector<std::pair<std::string, std::string>> out_pairs;
    for (const auto& [s, d] : attacks) {
      std::string a = caf.argument_name(s), b = caf.argument_name(d);
      if (canonical_order && b < a) std::swap(a, b);
      out_pairs.emplace_back(std::move(a), std::move(b));
    }
    std::sort(out_pairs.begin(), out_pairs.end());
    return out_pairs;
  };
  auto plain = name_pairs(caf.fixed_attacks(), false);
  auto control = name_pairs(caf.control_attacks(), false);
  plain.insert(plain.end(), control.begin(), control.end());
  std::sort(plain.begin(), plain.end());
  for (const auto& [s, d] : plain) out += "att(" + s + "," + d + ").\n";
  for (const auto& [s, d] : name_pairs(caf.uncertain_attacks(), false))
    out += "uatt(" + s + "," + d + ").\n";
  for (const auto& [s, d] : name_pairs(caf.symmetric_attacks(), true))
    out += "satt(" + s + "," + d + ").\n";
  return out;
}

// ---------------------------------------------------------------------------
// catl

namespace {

std::string format_action(const JointAction& action) {
  std::string out = "(";
  for (std::size_t i = 0; i < action.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(action[i]);
  }
  out += ")";
  return out;
}

// Reads a tuple fact argument as a joint action; moves must be positive.
std::optional<JointAction> read_action(Diags& diags, const FactArg& arg,
                                       std::size_t arity,
                                       const std::string& what) {
  if (arg.kind != FactArg::Tuple) {
    diags.error(DiagCode::SyntaxError, what + " must be a move tuple",
                arg.line, arg.column);
    return std::nullopt;
  }
  if (arg.tuple.size() != arity) {
    diags.error(DiagCode::ArityMismatch,
                what + " names " + std::to_string(arg.tuple.size()) +
                    " moves for " + std::to_string(arity) + " agent(s)",
                arg.line, arg.column);
    return std::nullopt;
  }
  JointAction action;
  for (const auto& item : arg.tuple) {
    if (item.kind != FactArg::Int || item.value <= 0) {
      diags.error(DiagCode::MoveOutOfRange,
                  "moves are positive integers", item.line, item.column);
      return std::nullopt;
    }
    action.push_back(static_cast<std::uint32_t>(item.value));
  }
  return action;
}

}  // namespace

ParseResult<CafAtsSystem> parse_catl(std::string_view text,
                                     std::string file_name,
                                     const FileLoader& loader) {
  Diags diags(std::move(file_name));
  auto facts = FactParser(text, diags).parse_all();

  static const std::set<std::string> known = {
      "agent", "state", "init",    "prop",   "moves",
      "trans", "caf",   "statecaf", "upsilon"};
  for (const auto& fact : facts)
    if (!known.count(fact.predicate))
      diags.error(DiagCode::SyntaxError,
                  "unknown predicate '" + fact.predicate + "'", fact.line,
                  fact.column);

  // Pass 1: agents, states, framework files.
  std::set<long long> agent_ids;
  std::vector<std::string> states;
  std::map<std::string, std::uint32_t> state_index;
  std::map<long long, std::pair<ControlFramework, std::string>> caf_by_index;
  for (const auto& fact : facts) {
    if (fact.predicate == "agent") {
      if (!check_shape(diags, fact, {FactArg::Int})) continue;
      if (!agent_ids.insert(fact.args[0].value).second)
        diags.warning(DiagCode::DuplicateFact, "agent declared twice",
                      fact.line, fact.column);
    } else if (fact.predicate == "state") {
      if (!check_shape(diags, fact, {FactArg::Ident})) continue;
      if (state_index.count(fact.args[0].text)) {
        diags.warning(DiagCode::DuplicateFact,
                      "state '" + fact.args[0].text + "' declared twice",
                      fact.line, fact.column);
        continue;
      }
      state_index[fact.args[0].text] =
          static_cast<std::uint32_t>(states.size());
      states.push_back(fact.args[0].text);
    } else if (fact.predicate == "caf") {
      if (!check_shape(diags, fact, {FactArg::Int, FactArg::Str})) continue;
      long long k = fact.args[0].value;
      if (caf_by_index.count(k)) {
        diags.error(DiagCode::DuplicateDeclaration,
                    "framework index " + std::to_string(k) +
                        " declared twice",
                    fact.line, fact.column);
        continue;
      }
      auto content = loader(fact.args[1].text);
      if (!content) {
        diags.error(DiagCode::CafLoadFailed,
                    "cannot read '" + fact.args[1].text + "'", fact.line,
                    fact.column);
        continue;
      }
      auto parsed = parse_caf(*content, fact.args[1].text);
      diags.splice(std::move(parsed.diagnostics));
      if (parsed.value)
        caf_by_index.emplace(
            k, std::make_pair(std::move(*parsed.value), fact.args[1].text));
    }
  }

  std::uint32_t agent_count = static_cast<std::uint32_t>(agent_ids.size());
  if (agent_ids.empty()) {
    diags.error(DiagCode::SyntaxError, "no agents declared", 1, 1);
  } else if (*agent_ids.begin() != 1 ||
             *agent_ids.rbegin() != static_cast<long long>(agent_count)) {
    diags.error(DiagCode::SyntaxError,
                "agent indices must be exactly 1.." +
                    std::to_string(agent_ids.size()),
                1, 1);
  }
  if (states.empty())
    diags.error(DiagCode::EmptyFramework, "no states declared", 1, 1);
  if (!caf_by_index.count(0)) {
    diags.error(DiagCode::MissingCafZero,
                "the framework family needs an entry at index 0", 1, 1);
  } else if (caf_by_index.rbegin()->first !=
             static_cast<long long>(caf_by_index.size()) - 1) {
    diags.error(DiagCode::UnknownCafIndex,
                "framework indices must be dense starting at 0", 1, 1);
  }
  if (diags.has_errors()) {
    ParseResult<CafAtsSystem> result;
    result.diagnostics = diags.take();
    return result;
  }

  auto known_state = [&](const FactArg& arg) -> std::optional<std::uint32_t> {
    auto it = state_index.find(arg.text);
    if (it == state_index.end()) {
      diags.error(DiagCode::UnknownState,
                  "state '" + arg.text + "' is not declared", arg.line,
                  arg.column);
      return std::nullopt;
    }
    return it->second;
  };
  auto known_caf = [&](const FactArg& arg) -> std::optional<std::uint32_t> {
    if (!caf_by_index.count(arg.value)) {
      diags.error(DiagCode::UnknownCafIndex,
                  "framework index " + std::to_string(arg.value) +
                      " is not declared",
                  arg.line, arg.column);
      return std::nullopt;
    }
    return static_cast<std::uint32_t>(arg.value);
  };

  // Pass 2: init, labels, move counts, static bindings.
  std::optional<std::uint32_t> init;
  std::vector<std::string> propositions;
  std::map<std::string, std::uint32_t> prop_index;
  std::vector<std::vector<std::uint32_t>> labels(states.size());
  std::vector<std::vector<std::uint32_t>> move_counts(
      states.size(), std::vector<std::uint32_t>(agent_count, 0));
  std::vector<std::optional<std::uint32_t>> state_caf(states.size());
  for (const auto& fact : facts) {
    if (fact.predicate == "init") {
      if (!check_shape(diags, fact, {FactArg::Ident})) continue;
      auto q = known_state(fact.args[0]);
      if (!q) continue;
      if (init && *init != *q)
        diags.error(DiagCode::DuplicateInit,
                    "conflicting init declarations", fact.line, fact.column);
      else if (init)
        diags.warning(DiagCode::DuplicateFact, "init declared twice",
                      fact.line, fact.column);
      else
        init = *q;
    } else if (fact.predicate == "prop") {
      if (!check_shape(diags, fact, {FactArg::Ident, FactArg::Ident}))
        continue;
      auto q = known_state(fact.args[0]);
      if (!q) continue;
      const std::string& p = fact.args[1].text;
      auto it = prop_index.find(p);
      std::uint32_t pid;
      if (it == prop_index.end()) {
        pid = static_cast<std::uint32_t>(propositions.size());
        prop_index[p] = pid;
        propositions.push_back(p);
      } else {
        pid = it->second;
      }
      if (std::count(labels[*q].begin(), labels[*q].end(), pid))
        diags.warning(DiagCode::DuplicateFact, "label declared twice",
                      fact.line, fact.column);
      else
        labels[*q].push_back(pid);
    } else if (fact.predicate == "moves") {
      if (!check_shape(diags, fact, {FactArg::Ident, FactArg::Int,
                                     FactArg::Int}))
        continue;
      auto q = known_state(fact.args[0]);
      if (!q) continue;
      long long agent = fact.args[1].value;
      if (agent < 1 || agent > agent_count) {
        diags.error(DiagCode::UnknownAgent,
                    "agent " + std::to_string(agent) + " is not declared",
                    fact.args[1].line, fact.args[1].column);
        continue;
      }
      if (fact.args[2].value < 1) {
        diags.error(DiagCode::MoveOutOfRange,
                    "move counts are at least 1", fact.args[2].line,
                    fact.args[2].column);
        continue;
      }
      std::uint32_t& slot = move_counts[*q][agent - 1];
      auto value = static_cast<std::uint32_t>(fact.args[2].value);
      if (slot != 0 && slot != value)
        diags.error(DiagCode::DuplicateDeclaration,
                    "conflicting move counts for state '" + states[*q] +
                        "', agent " + std::to_string(agent),
                    fact.line, fact.column);
      else if (slot != 0)
        diags.warning(DiagCode::DuplicateFact, "move count declared twice",
                      fact.line, fact.column);
      else
        slot = value;
    } else if (fact.predicate == "statecaf") {
      if (!check_shape(diags, fact, {FactArg::Ident, FactArg::Int})) continue;
      auto q = known_state(fact.args[0]);
      auto k = known_caf(fact.args[1]);
      if (!q || !k) continue;
      if (state_caf[*q] && *state_caf[*q] != *k)
        diags.error(DiagCode::DuplicateDeclaration,
                    "conflicting framework bindings for state '" +
                        states[*q] + "'",
                    fact.line, fact.column);
      else if (state_caf[*q])
        diags.warning(DiagCode::DuplicateFact, "binding declared twice",
                      fact.line, fact.column);
      else
        state_caf[*q] = *k;
    }
  }
  if (!init)
    diags.error(DiagCode::MissingInit, "no init state declared", 1, 1);

  // Unset move counts default to one move.
  for (std::size_t q = 0; q < states.size(); ++q)
    for (std::uint32_t i = 0; i < agent_count; ++i)
      if (move_counts[q][i] == 0) {
        move_counts[q][i] = 1;
        diags.warning(DiagCode::ThetaDefaulted,
                      "no move count for state '" + states[q] + "', agent " +
                          std::to_string(i + 1) + "; defaulting to 1",
                      1, 1);
      }

  // Pass 3: transitions and framework updates.
  std::map<std::pair<std::uint32_t, JointAction>, std::uint32_t> transitions;
  std::map<std::pair<std::uint32_t, JointAction>, std::uint32_t> upsilon;
  for (const auto& fact : facts) {
    if (fact.predicate == "trans") {
      if (fact.args.size() != 3) {
        diags.error(DiagCode::SyntaxError, "trans takes 3 arguments",
                    fact.line, fact.column);
        continue;
      }
      if (fact.args[0].kind != FactArg::Ident ||
          fact.args[2].kind != FactArg::Ident) {
        diags.error(DiagCode::SyntaxError,
                    "trans endpoints must be state identifiers", fact.line,
                    fact.column);
        continue;
      }
      auto q = known_state(fact.args[0]);
      auto q2 = known_state(fact.args[2]);
      auto action = read_action(diags, fact.args[1], agent_count,
                                "a transition action");
      if (!q || !q2 || !action) continue;
      bool bad_move = false;
      for (std::uint32_t i = 0; i < agent_count; ++i) {
        if ((*action)[i] > move_counts[*q][i]) {
          diags.error(DiagCode::MoveOutOfRange,
                      "move " + std::to_string((*action)[i]) + " of agent " +
                          std::to_string(i + 1) + " is outside 1.." +
                          std::to_string(move_counts[*q][i]) + " at state '" +
                          states[*q] + "'",
                      fact.args[1].line, fact.args[1].column);
          bad_move = true;
        }
      }
      if (bad_move) continue;
      auto key = std::make_pair(*q, *action);
      auto it = transitions.find(key);
      if (it != transitions.end()) {
        if (it->second != *q2)
          diags.error(DiagCode::NondeterministicTransition,
                      "conflicting successors for state '" + states[*q] +
                          "', action " + format_action(*action),
                      fact.line, fact.column);
        else
          diags.warning(DiagCode::DuplicateFact, "transition declared twice",
                        fact.line, fact.column);
        continue;
      }
      transitions.emplace(key, *q2);
    } else if (fact.predicate == "upsilon") {
      if (fact.args.size() != 3) {
        diags.error(DiagCode::SyntaxError, "upsilon takes 3 arguments",
                    fact.line, fact.column);
        continue;
      }
      if (fact.args[0].kind != FactArg::Int ||
          fact.args[2].kind != FactArg::Int) {
        diags.error(DiagCode::SyntaxError,
                    "upsilon endpoints must be framework indices", fact.line,
                    fact.column);
        continue;
      }
      auto k = known_caf(fact.args[0]);
      auto k2 = known_caf(fact.args[2]);
      auto action = read_action(diags, fact.args[1], agent_count,
                                "an update action");
      if (!k || !k2 || !action) continue;
      auto key = std::make_pair(*k, *action);
      auto it = upsilon.find(key);
      if (it != upsilon.end()) {
        if (it->second != *k2)
          diags.error(DiagCode::DuplicateDeclaration,
                      "conflicting updates for framework " +
                          std::to_string(*k) + ", action " +
                          format_action(*action),
                      fact.line, fact.column);
        else
          diags.warning(DiagCode::DuplicateFact, "update declared twice",
                        fact.line, fact.column);
        continue;
      }
      upsilon.emplace(key, *k2);
    }
  }

  // Totality of the transition function over each state's action product.
  for (std::uint32_t q = 0; q < states.size() && !diags.has_errors(); ++q) {
    std::uint64_t product = 1;
    for (std::uint32_t i = 0; i < agent_count; ++i)
      product *= move_counts[q][i];
    if (product > (std::uint64_t{1} << 20)) {
      diags.error(DiagCode::SyntaxError,
                  "state '" + states[q] + "' has too many joint actions", 1,
                  1);
      break;
    }
    JointAction action(agent_count, 1);
    for (;;) {
      if (!transitions.count({q, action})) {
        diags.error(DiagCode::NonTotalTransition,
                    "state '" + states[q] + "' is missing a transition for " +
                        format_action(action),
                    1, 1);
        break;
      }
      std::size_t i = agent_count;
      while (i-- > 0) {
        if (action[i] < move_counts[q][i]) {
          ++action[i];
          break;
        }
        action[i] = 1;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }

  if (diags.has_errors()) {
    ParseResult<CafAtsSystem> result;
    result.diagnostics = diags.take();
    return result;
  }

  // Reachability closure of the framework-update map: walk every
  // (state, framework) pair reachable from the static bindings and warn
  // once for each (framework, action shape) pair that falls back to the
  // identity update.
  {
    std::set<std::pair<std::uint32_t, std::uint32_t>> visited;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> todo;
    std::set<std::pair<std::uint32_t, JointAction>> warned;
    for (std::uint32_t q = 0; q < states.size(); ++q) {
      auto seed = std::make_pair(q, state_caf[q].value_or(0));
      if (visited.insert(seed).second) todo.push_back(seed);
    }
    while (!todo.empty()) {
      auto [q, k] = todo.back();
      todo.pop_back();
      JointAction action(agent_count, 1);
      for (;;) {
        std::uint32_t k2 = k;
        auto it = upsilon.find({k, action});
        if (it != upsilon.end()) {
          k2 = it->second;
        } else if (warned.insert({k, action}).second) {
          diags.warning(DiagCode::UpsilonDefaulted,
                        "no update for framework " + std::to_string(k) +
                            " under action " + format_action(action) +
                            "; defaulting to identity",
                        1, 1);
        }
        auto next = std::make_pair(transitions.at({q, action}), k2);
        if (visited.insert(next).second) todo.push_back(next);
        std::size_t i = agent_count;
        while (i-- > 0) {
          if (action[i] < move_counts[q][i]) {
            ++action[i];
            break;
          }
          action[i] = 1;
        }
        if (i == static_cast<std::size_t>(-1)) break;
      }
    }
  }

  CafAtsSystem::Data data;
  data.agent_count = agent_count;
  data.states = states;
  data.init_state = *init;
  data.propositions = propositions;
  data.labels = labels;
  data.move_counts = move_counts;
  data.transitions = transitions;
  for (auto& [k, entry] : caf_by_index) {
    data.cafs.push_back(std::move(entry.first));
    data.caf_paths.push_back(entry.second);
  }
  data.upsilon = upsilon;
  for (std::size_t q = 0; q < states.size(); ++q)
    data.state_caf.push_back(state_caf[q].value_or(0));

  ParseResult<CafAtsSystem> result;
  try {
    CafAtsSystem sys = CafAtsSystem::create(std::move(data));
    result.value = std::move(sys);
  } catch (const Error& e) {
    diags.error(DiagCode::SyntaxError, e.what(), 1, 1);
  }
  result.diagnostics = diags.take();
  if (result.has_errors()) result.value.reset();
  return result;
}

ParseResult<CafAtsSystem> parse_catl_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult<CafAtsSystem> result;
    result.diagnostics.push_back({DiagSeverity::Error, DiagCode::CafLoadFailed,
                                  "cannot read '" + path + "'",
                                  SourceLocation{path, 1, 1}});
    return result;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  FileLoader loader = [base](const std::string& rel)
      -> std::optional<std::string> {
    std::filesystem::path p(rel);
    if (p.is_relative()) p = base / p;
    std::ifstream f(p, std::ios::binary);
    if (!f) return std::nullopt;
    std::stringstream content;
    content << f.rdbuf();
    return content.str();
  };
  return parse_catl(buffer.str(), path, loader);
}

std::string serialize_catl(const CafAtsSystem& sys) {
  std::string out;
  for (std::uint32_t i = 1; i <= sys.agent_count(); ++i)
    out += "agent(" + std::to_string(i) + ").\n";

  std::vector<std::pair<std::string, std::uint32_t>> by_name;
  for (std::uint32_t q = 0; q < sys.states().size(); ++q)
    by_name.emplace_back(sys.states()[q], q);
  std::sort(by_name.begin(), by_name.end());

  for (const auto& [name, q] : by_name) out += "state(" + name + ").\n";
  out += "init(" + sys.states()[sys.init_state()] + ").\n";

  for (const auto& [name, q] : by_name) {
    std::vector<std::string> props;
    for (std::uint32_t p : sys.labels_of(q))
      props.push_back(sys.propositions()[p]);
    std::sort(props.begin(), props.end());
    for (const auto& p : props) out += "prop(" + name + "," + p + ").\n";
  }
  for (const auto& [name, q] : by_name)
    for (std::uint32_t i = 1; i <= sys.agent_count(); ++i)
      out += "moves(" + name + "," + std::to_string(i) + "," +
             std::to_string(sys.move_count(q, i)) + ").\n";

  for (std::size_t k = 0; k < sys.cafs().size(); ++k) {
    std::string path = sys.caf_paths()[k];
    if (path.empty()) path = "caf" + std::to_string(k) + ".caf";
    out += "caf(" + std::to_string(k) + ",\"" + path + "\").\n";
  }
  for (const auto& [name, q] : by_name)
    if (sys.state_caf(q) != 0)
      out += "statecaf(" + name + "," + std::to_string(sys.state_caf(q)) +
             ").\n";

  std::vector<std::string> trans_lines;
  for (const auto& [key, next] : sys.transitions())
    trans_lines.push_back("trans(" + sys.states()[key.first] + "," +
                          format_action(key.second) + "," +
                          sys.states()[next] + ").");
  std::sort(trans_lines.begin(), trans_lines.end());
  for (const auto& line : trans_lines) out += line + "\n";

  for (const auto& [key, next] : sys.upsilon_entries())
    out += "upsilon(" + std::to_string(key.first) + "," +
           format_action(key.second) + "," + std::to_string(next) + ").\n";
  return out;
}

}  // namespace cafcoal
