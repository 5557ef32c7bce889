#include <cctype>

#include "cafcoal/formats.hpp"

namespace cafcoal {

namespace {

bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

struct FToken {
  enum Type {
    Ident, Int, Not, And, Or, Implies, LParen, RParen,
    CoalOpen, CoalClose, Comma, End, Bad
  } type = End;
  std::string text;
  std::uint32_t column = 1;
};

class FormulaLexer {
 public:
  explicit FormulaLexer(std::string_view text) : text_(text) {}

  FToken next() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
            text_[pos_] == '\n'))
      ++pos_;
    FToken t;
    t.column = static_cast<std::uint32_t>(pos_ + 1);
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (static_cast<unsigned char>(c) > 127) {
      t.type = FToken::Bad;
      t.text = "non-ASCII byte";
      ++pos_;
      return t;
    }
    if (ident_start(c)) {
      t.type = FToken::Ident;
      while (pos_ < text_.size() && ident_char(text_[pos_]))
        t.text += text_[pos_++];
      return t;
    }
    if (c >= '0' && c <= '9') {
      t.type = FToken::Int;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
        t.text += text_[pos_++];
      return t;
    }
    auto two = [&](FToken::Type type) {
      t.type = type;
      t.text = text_.substr(pos_, 2);
      pos_ += 2;
      return t;
    };
    if (c == '<' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '<')
      return two(FToken::CoalOpen);
    if (c == '>' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>')
      return two(FToken::CoalClose);
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>')
      return two(FToken::Implies);
    ++pos_;
    switch (c) {
      case '!': t.type = FToken::Not; break;
      case '&': t.type = FToken::And; break;
      case '|': t.type = FToken::Or; break;
      case '(': t.type = FToken::LParen; break;
      case ')': t.type = FToken::RParen; break;
      case ',': t.type = FToken::Comma; break;
      default:
        t.type = FToken::Bad;
        t.text = std::string("unexpected character '") + c + "'";
    }
    return t;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class FormulaParser {
 public:
  FormulaParser(std::string_view text, std::string file)
      : lexer_(text), file_(std::move(file)) {
    shift();
  }

  ParseResult<Formula> run() {
    ParseResult<Formula> result;
    if (current_.type == FToken::End) {
      fail(DiagCode::EmptyInput, "empty formula");
    } else {
      auto formula = parse_implies();
      if (formula && current_.type != FToken::End)
        fail(DiagCode::SyntaxError, "unexpected trailing input");
      if (!failed_) result.value = std::move(formula);
    }
    result.diagnostics = std::move(diagnostics_);
    return result;
  }

 private:
  // implies := or ('->' implies)?          right-associative, loosest
  std::optional<Formula> parse_implies() {
    auto lhs = parse_or();
    if (!lhs) return std::nullopt;
    if (current_.type != FToken::Implies) return lhs;
    shift();
    auto rhs = parse_implies();
    if (!rhs) return std::nullopt;
    return Formula::implication(std::move(*lhs), std::move(*rhs));
  }

  // or := and ('|' and)*                   sugar: a | b == !(!a & !b)
  std::optional<Formula> parse_or() {
    auto lhs = parse_and();
    if (!lhs) return std::nullopt;
    while (current_.type == FToken::Or) {
      shift();
      auto rhs = parse_and();
      if (!rhs) return std::nullopt;
      lhs = Formula::negation(Formula::conjunction(
          Formula::negation(std::move(*lhs)),
          Formula::negation(std::move(*rhs))));
    }
    return lhs;
  }

  // and := unary ('&' unary)*              left-associative
  std::optional<Formula> parse_and() {
    auto lhs = parse_unary();
    if (!lhs) return std::nullopt;
    while (current_.type == FToken::And) {
      shift();
      auto rhs = parse_unary();
      if (!rhs) return std::nullopt;
      lhs = Formula::conjunction(std::move(*lhs), std::move(*rhs));
    }
    return lhs;
  }

  // unary := '!' unary | '<<' agents? '>>' unary | primary
  std::optional<Formula> parse_unary() {
    if (current_.type == FToken::Not) {
      shift();
      auto child = parse_unary();
      if (!child) return std::nullopt;
      return Formula::negation(std::move(*child));
    }
    if (current_.type == FToken::CoalOpen) {
      shift();
      std::vector<std::uint32_t> agents;
      if (current_.type == FToken::Int) {
        for (;;) {
          if (current_.type != FToken::Int) {
            fail(DiagCode::SyntaxError, "expected an agent index");
            return std::nullopt;
          }
          long long value =
              current_.text.size() > 9 ? -1 : std::stoll(current_.text);
          if (value < 1) {
            fail(DiagCode::SyntaxError, "agent indices are positive integers");
            return std::nullopt;
          }
          agents.push_back(static_cast<std::uint32_t>(value));
          shift();
          if (current_.type != FToken::Comma) break;
          shift();
        }
      }
      if (current_.type != FToken::CoalClose) {
        fail(DiagCode::SyntaxError, "expected '>>'");
        return std::nullopt;
      }
      shift();
      auto child = parse_unary();
      if (!child) return std::nullopt;
      return Formula::coalition(std::move(agents), std::move(*child));
    }
    return parse_primary();
  }

  // primary := 'zeta' '(' IDENT ')' | IDENT | '(' implies ')'
  std::optional<Formula> parse_primary() {
    if (current_.type == FToken::Ident) {
      std::string name = current_.text;
      shift();
      if (name == "zeta" && current_.type == FToken::LParen) {
        shift();
        if (current_.type != FToken::Ident) {
          fail(DiagCode::SyntaxError, "expected an argument name");
          return std::nullopt;
        }
        std::string arg = current_.text;
        shift();
        if (current_.type != FToken::RParen) {
          fail(DiagCode::SyntaxError, "expected ')'");
          return std::nullopt;
        }
        shift();
        return Formula::zeta(arg);
      }
      return Formula::prop(name);
    }
    if (current_.type == FToken::LParen) {
      shift();
      auto inner = parse_implies();
      if (!inner) return std::nullopt;
      if (current_.type != FToken::RParen) {
        fail(DiagCode::SyntaxError, "expected ')'");
        return std::nullopt;
      }
      shift();
      return inner;
    }
    if (current_.type == FToken::Bad)
      fail(DiagCode::SyntaxError, current_.text);
    else
      fail(DiagCode::SyntaxError, "expected a formula");
    return std::nullopt;
  }

  void fail(DiagCode code, std::string message) {
    if (failed_) return;
    failed_ = true;
    diagnostics_.push_back({DiagSeverity::Error, code, std::move(message),
                            SourceLocation{file_, 1, current_.column}});
  }

  void shift() { current_ = lexer_.next(); }

  FormulaLexer lexer_;
  std::string file_;
  FToken current_;
  bool failed_ = false;
  std::vector<ParseDiagnostic> diagnostics_;
};

// Binding strength used to decide where parentheses are needed.
int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::And: return 2;
    case Formula::Kind::Not:
    case Formula::Kind::Coalition: return 3;
    default: return 4;
  }
}

void render(const Formula& f, std::string& out) {
  auto child_at_least = [&](const Formula& child, int floor) {
    if (precedence(child) < floor) {
      out += "(";
      render(child, out);
      out += ")";
    } else {
      render(child, out);
    }
  };
  switch (f.kind()) {
    case Formula::Kind::Prop:
      out += f.token();
      break;
    case Formula::Kind::Zeta:
      out += "zeta(" + f.token() + ")";
      break;
    case Formula::Kind::Not:
      out += "!";
      child_at_least(f.child(), 3);
      break;
    case Formula::Kind::Coalition: {
      out += "<<";
      bool first = true;
      for (std::uint32_t agent : f.agents()) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(agent);
      }
      out += ">> ";
      child_at_least(f.child(), 3);
      break;
    }
    case Formula::Kind::And:
      child_at_least(f.lhs(), 2);
      out += " & ";
      child_at_least(f.rhs(), 3);
      break;
    case Formula::Kind::Implies:
      child_at_least(f.lhs(), 2);
      out += " -> ";
      child_at_least(f.rhs(), 1);
      break;
  }
}

}  // namespace

ParseResult<Formula> parse_formula(std::string_view text,
                                   std::string file_name) {
  return FormulaParser(text, std::move(file_name)).run();
}

std::string serialize_formula(const Formula& f) {
  std::string out;
  render(f, out);
  return out;
}

}  // namespace cafcoal
