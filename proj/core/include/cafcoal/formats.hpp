#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cafcoal/af.hpp"
#include "cafcoal/caf.hpp"
#include "cafcoal/catl.hpp"

namespace cafcoal {

// 1-based position of a diagnostic in its source file.
struct SourceLocation {
  std::string file;
  std::uint32_t line = 1;
  std::uint32_t column = 1;
};

enum class DiagSeverity : std::uint8_t { Error, Warning };

enum class DiagCode : std::uint8_t {
  SyntaxError,
  EmptyInput,
  EmptyFramework,
  UndeclaredArgument,
  DuplicateFact,
  DuplicateDeclaration,
  DuplicateAttack,
  MissingSeparator,
  PartOverlap,
  IllegalUncertainControlAttack,
  ReflexiveSymmetricAttack,
  NonTotalTransition,
  NondeterministicTransition,
  ArityMismatch,
  UnknownCafIndex,
  MoveOutOfRange,
  UnknownState,
  UnknownAgent,
  MissingInit,
  DuplicateInit,
  CafLoadFailed,
  MissingCafZero,
  ThetaDefaulted,
  UpsilonDefaulted,
};

std::string_view to_string(DiagCode code);

struct ParseDiagnostic {
  DiagSeverity severity = DiagSeverity::Error;
  DiagCode code = DiagCode::SyntaxError;
  std::string message;
  SourceLocation location;
};

// "file:line:col: error: message" with optional ANSI color on the severity.
std::string format_diagnostic(const ParseDiagnostic& diag, bool color = false);

// Parsers never throw on malformed input: value is set iff there were no
// error-severity diagnostics; warnings never affect the value.
template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
  bool has_errors() const {
    for (const auto& d : diagnostics)
      if (d.severity == DiagSeverity::Error) return true;
    return false;
  }
};

// arg(a)./att(a,b). facts, '%' comments.
ParseResult<ArgumentationFramework> parse_apx(std::string_view text,
                                              std::string file_name = "<apx>");
// Node lines, one '#' separator line, edge lines.
ParseResult<ArgumentationFramework> parse_tgf(std::string_view text,
                                              std::string file_name = "<tgf>");
// farg/uarg/carg/att/uatt/satt facts; att is classified as a control attack
// iff an endpoint is a control argument.
ParseResult<ControlFramework> parse_caf(std::string_view text,
                                        std::string file_name = "<caf>");

// Resolves a reference found in a system file to that file's content.
using FileLoader =
    std::function<std::optional<std::string>(const std::string& path)>;

// agent/state/init/prop/moves/trans/caf/statecaf/upsilon facts. Referenced
// framework files are fetched through `loader` (paths as written in the
// input); parse_catl_file reads from disk relative to the system file.
ParseResult<CafAtsSystem> parse_catl(std::string_view text,
                                     std::string file_name,
                                     const FileLoader& loader);
ParseResult<CafAtsSystem> parse_catl_file(const std::string& path);

// Canonical serializers: declarations sorted, so any two structurally equal
// values produce identical bytes and parse(serialize(v)) == v structurally.
std::string serialize_apx(const ArgumentationFramework& af);
std::string serialize_tgf(const ArgumentationFramework& af);
std::string serialize_caf(const ControlFramework& caf);
std::string serialize_catl(const CafAtsSystem& sys);

// Grammar, tightest to loosest: '!' and '<<a,b>>' prefixes, '&'
// (left-assoc), '|' (sugar: a|b becomes !(!a & !b)), '->' (right-assoc).
// Atoms are identifiers and zeta(identifier).
ParseResult<Formula> parse_formula(std::string_view text,
                                   std::string file_name = "<formula>");
// Minimal parentheses; parse_formula(serialize_formula(f)) == f.
std::string serialize_formula(const Formula& f);

}  // namespace cafcoal
