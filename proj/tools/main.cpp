// cafcoal: solver front end for plain, control and coalition argumentation.
//
// Exit codes: 0 success / positive verdict, 1 negative verdict,
// 2 usage, parse or validation error, 3 search budget exceeded.
// Verdicts go to stdout, diagnostics to stderr.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cafcoal/af.hpp"
#include "cafcoal/caf.hpp"
#include "cafcoal/catl.hpp"
#include "cafcoal/errors.hpp"
#include "cafcoal/formats.hpp"

#if defined(_WIN32)
#include <io.h>
#define CAFCOAL_ISATTY(fd) _isatty(fd)
#else
#include <unistd.h>
#define CAFCOAL_ISATTY(fd) isatty(fd)
#endif

namespace {

using namespace cafcoal;

bool stderr_color() {
  const char* env = std::getenv("CAFCOAL_COLOR");
  if (env && std::string(env) == "never") return false;
  return CAFCOAL_ISATTY(fileno(stderr)) != 0;
}

void report_error(const std::string& message) {
  if (stderr_color())
    std::cerr << "\033[31merror\033[0m: " << message << "\n";
  else
    std::cerr << "error: " << message << "\n";
}

// Prints every diagnostic; returns true when any of them is an error.
bool report_diagnostics(const std::vector<ParseDiagnostic>& diags) {
  bool color = stderr_color();
  bool errors = false;
  for (const auto& d : diags) {
    std::cerr << format_diagnostic(d, color) << "\n";
    errors |= d.severity == DiagSeverity::Error;
  }
  return errors;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::optional<ArgumentationFramework> load_framework(const std::string& path) {
  auto content = read_file(path);
  if (!content) {
    report_error("cannot read '" + path + "'");
    return std::nullopt;
  }
  ParseResult<ArgumentationFramework> result;
  if (ends_with(path, ".apx"))
    result = parse_apx(*content, path);
  else if (ends_with(path, ".tgf"))
    result = parse_tgf(*content, path);
  else {
    report_error("'" + path + "' has an unsupported extension (want .apx or .tgf)");
    return std::nullopt;
  }
  report_diagnostics(result.diagnostics);
  return std::move(result.value);
}

std::optional<ControlFramework> load_control(const std::string& path) {
  auto content = read_file(path);
  if (!content) {
    report_error("cannot read '" + path + "'");
    return std::nullopt;
  }
  auto result = parse_caf(*content, path);
  report_diagnostics(result.diagnostics);
  return std::move(result.value);
}

std::string format_configuration(const ControlFramework& caf,
                                 const Configuration& config) {
  std::string out = "{";
  bool first = true;
  for (const auto& name : configuration_names(caf, config)) {
    if (!first) out += ", ";
    first = false;
    out += name;
  }
  return out + "}";
}

std::string joined_or_dash(const std::vector<std::string>& items) {
  if (items.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out;
}

struct SolveArgs {
  std::string file;
  std::string semantics = "grounded";
  std::string task = "EE";
  std::string argument;
  std::size_t limit = 10000;
};

int run_solve(const SolveArgs& args) {
  auto semantics = semantics_from_string(args.semantics);
  if (!semantics) {
    report_error("unknown semantics '" + args.semantics + "'");
    return 2;
  }
  if (args.task != "EE" && args.argument.empty()) {
    report_error("--task " + args.task + " needs --arg");
    return 2;
  }
  if (args.task == "EE" && !args.argument.empty()) {
    report_error("--arg only applies to --task CA and --task SA");
    return 2;
  }
  auto af = load_framework(args.file);
  if (!af) return 2;

  if (args.task == "EE") {
    auto extensions = enumerate_extensions(*af, *semantics);
    std::size_t shown = std::min(args.limit, extensions.size());
    for (std::size_t i = 0; i < shown; ++i)
      std::cout << af->format_extension(extensions[i]) << "\n";
    if (shown < extensions.size())
      std::cout << "% truncated: showing " << shown << " of "
                << extensions.size() << " extensions\n";
    return 0;
  }
  AcceptanceMode mode =
      args.task == "CA" ? AcceptanceMode::Credulous : AcceptanceMode::Skeptical;
  if (!af->index_of(args.argument)) {
    report_error("argument '" + args.argument + "' is not in the framework");
    return 2;
  }
  bool accepted = is_accepted(*af, args.argument, *semantics, mode);
  std::cout << (accepted ? "YES" : "NO") << "\n";
  return accepted ? 0 : 1;
}

struct CompletionsArgs {
  std::string file;
  bool verbose = false;
  std::uint64_t budget = Budgets{}.completions;
};

int run_completions(const CompletionsArgs& args) {
  auto caf = load_control(args.file);
  if (!caf) return 2;
  std::cout << "completions: " << count_completions(*caf) << "\n";
  if (!args.verbose) return 0;

  auto completions = enumerate_completions(*caf, args.budget);
  Configuration empty;
  empty.selected.assign(caf->control_arguments().size(), 0);
  for (std::size_t k = 0; k < completions.size(); ++k) {
    std::cout << "% completion " << k << "\n";
    std::cout << serialize_apx(induced_framework(*caf, completions[k], empty));
  }
  return 0;
}

struct ControlArgs {
  std::string file;
  std::string target;
  std::string semantics = "grounded";
  std::string mode = "skeptical-accept";
  Budgets budgets;
};

int run_control(const ControlArgs& args) {
  auto semantics = semantics_from_string(args.semantics);
  if (!semantics) {
    report_error("unknown semantics '" + args.semantics + "'");
    return 2;
  }
  auto mode = target_mode_from_string(args.mode);
  if (!mode) {
    report_error("unknown acceptance mode '" + args.mode + "'");
    return 2;
  }
  auto caf = load_control(args.file);
  if (!caf) return 2;

  TargetQuery query{args.target, *semantics, *mode};
  auto config = find_controlling_configuration(*caf, query, args.budgets);
  if (config) {
    std::cout << "configuration: " << format_configuration(*caf, *config)
              << "\n";
    return 0;
  }
  std::cout << "configuration: none\n";
  return 1;
}

struct CheckArgs {
  std::string file;
  std::string formula;
  std::string queries_file;
  std::string state;
  std::string zeta_policy;
  bool witness = false;
  Budgets budgets;
};

std::optional<ZetaPolicy> parse_zeta_policy(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  auto semantics = semantics_from_string(text.substr(0, colon));
  auto mode = target_mode_from_string(text.substr(colon + 1));
  if (!semantics || !mode) return std::nullopt;
  return ZetaPolicy{*semantics, *mode};
}

int run_check(const CheckArgs& args) {
  if (args.formula.empty() == args.queries_file.empty()) {
    report_error("pass exactly one of --formula and --queries");
    return 2;
  }
  std::vector<std::string> lines;
  if (!args.formula.empty()) {
    lines.push_back(args.formula);
  } else {
    auto content = read_file(args.queries_file);
    if (!content) {
      report_error("cannot read '" + args.queries_file + "'");
      return 2;
    }
    std::stringstream stream(*content);
    std::string line;
    while (std::getline(stream, line)) {
      auto comment = line.find('%');
      if (comment != std::string::npos) line.erase(comment);
      auto start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos) continue;
      auto end = line.find_last_not_of(" \t\r");
      lines.push_back(line.substr(start, end - start + 1));
    }
    if (lines.empty()) {
      report_error("'" + args.queries_file + "' holds no queries");
      return 2;
    }
  }

  auto result = parse_catl_file(args.file);
  if (report_diagnostics(result.diagnostics) || !result.value) return 2;
  CafAtsSystem sys = std::move(*result.value);
  sys.set_budgets(args.budgets);
  if (!args.zeta_policy.empty()) {
    auto policy = parse_zeta_policy(args.zeta_policy);
    if (!policy) {
      report_error("--zeta-policy wants the form <semantics>:<mode>");
      return 2;
    }
    sys.set_zeta_policy(*policy);
  }
  std::size_t state = sys.init_state();
  if (!args.state.empty()) {
    auto idx = sys.state_index(args.state);
    if (!idx) {
      report_error("state '" + args.state + "' is not declared");
      return 2;
    }
    state = *idx;
  }

  bool all_true = true;
  for (const auto& line : lines) {
    auto parsed = parse_formula(line, "<formula>");
    if (report_diagnostics(parsed.diagnostics) || !parsed.value) return 2;
    const Formula& formula = *parsed.value;
    bool verdict = satisfies(sys, state, formula);
    all_true &= verdict;
    std::cout << sys.states()[state] << " |= " << serialize_formula(formula)
              << " : " << (verdict ? "true" : "false") << "\n";
    if (args.witness && formula.kind() == Formula::Kind::Coalition) {
      if (!verdict) {
        std::cout << "witness: none\n";
      } else {
        auto witness = witness_coalition_action(sys, state, formula.agents(),
                                                formula.child());
        if (!witness || witness->moves.empty()) {
          std::cout << "witness: empty\n";
        } else {
          std::cout << "witness: ";
          for (std::size_t i = 0; i < witness->moves.size(); ++i) {
            if (i) std::cout << ", ";
            std::cout << witness->moves[i].first << "->"
                      << witness->moves[i].second;
          }
          std::cout << "\n";
        }
      }
    }
  }
  return all_true ? 0 : 1;
}

struct SimulateArgs {
  std::string file;
  std::string actions;
  std::string state;
  std::string zeta_policy;
  Budgets budgets;
};

std::optional<std::vector<JointAction>> parse_actions(const std::string& text,
                                                      std::uint32_t agents) {
  std::vector<JointAction> script;
  std::stringstream stream(text);
  std::string chunk;
  while (std::getline(stream, chunk, ';')) {
    JointAction action;
    std::stringstream inner(chunk);
    std::string item;
    while (std::getline(inner, item, ',')) {
      auto start = item.find_first_not_of(" \t");
      if (start == std::string::npos) return std::nullopt;
      auto end = item.find_last_not_of(" \t");
      item = item.substr(start, end - start + 1);
      if (item.empty() || item.size() > 9) return std::nullopt;
      for (char c : item)
        if (c < '0' || c > '9') return std::nullopt;
      long value = std::stol(item);
      if (value < 1) return std::nullopt;
      action.push_back(static_cast<std::uint32_t>(value));
    }
    if (action.size() != agents) return std::nullopt;
    script.push_back(std::move(action));
  }
  return script;
}

int run_simulate(const SimulateArgs& args) {
  auto result = parse_catl_file(args.file);
  if (report_diagnostics(result.diagnostics) || !result.value) return 2;
  CafAtsSystem sys = std::move(*result.value);
  sys.set_budgets(args.budgets);
  if (!args.zeta_policy.empty()) {
    auto policy = parse_zeta_policy(args.zeta_policy);
    if (!policy) {
      report_error("--zeta-policy wants the form <semantics>:<mode>");
      return 2;
    }
    sys.set_zeta_policy(*policy);
  }
  std::size_t state = sys.init_state();
  if (!args.state.empty()) {
    auto idx = sys.state_index(args.state);
    if (!idx) {
      report_error("state '" + args.state + "' is not declared");
      return 2;
    }
    state = *idx;
  }
  auto script = parse_actions(args.actions, sys.agent_count());
  if (!script) {
    report_error("--actions wants moves like \"1,1;2,1\" with one move per "
                 "agent in each step");
    return 2;
  }
  auto trace = simulate(sys, state, *script);
  for (const auto& record : trace)
    std::cout << record.step << "\t" << record.state << "\t"
              << record.caf_index << "\t" << joined_or_dash(record.props)
              << "\t" << joined_or_dash(record.zeta_true) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Solver for plain, control and coalition argumentation.\n"
      "Exit codes: 0 positive verdict / success, 1 negative verdict,\n"
      "2 usage or input error, 3 search budget exceeded."};
  app.require_subcommand(1);
  app.fallthrough();

  Budgets budgets;
  bool verbose = false;
  app.add_option("--budget-completions", budgets.completions,
                 "Largest completion count a search may enumerate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--budget-configurations", budgets.configurations,
                 "Largest configuration count a search may try")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--verbose", verbose, "Print extra detail where supported");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand(
      "solve", "Enumerate extensions or decide acceptance (.apx/.tgf)");
  solve->add_option("file", solve_args.file, "Framework file")->required();
  solve->add_option("--semantics", solve_args.semantics,
                    "admissible|complete|grounded|preferred|stable")
      ->capture_default_str();
  solve
      ->add_option("--task", solve_args.task,
                   "EE (enumerate), CA (credulous), SA (skeptical; vacuously "
                   "YES when no extension exists)")
      ->check(CLI::IsMember({"EE", "CA", "SA"}))
      ->capture_default_str();
  solve->add_option("--arg", solve_args.argument,
                    "Queried argument for CA/SA");
  solve
      ->add_option("--limit", solve_args.limit,
                   "Largest number of extensions EE prints")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CompletionsArgs completions_args;
  auto* completions = app.add_subcommand(
      "completions", "Count (and with --verbose, list) completions (.caf)");
  completions->add_option("file", completions_args.file, "Control framework")
      ->required();

  ControlArgs control_args;
  auto* control = app.add_subcommand(
      "control", "Find a smallest controlling configuration (.caf)");
  control->add_option("file", control_args.file, "Control framework")
      ->required();
  control->add_option("--target", control_args.target, "Fixed target argument")
      ->required();
  control->add_option("--semantics", control_args.semantics,
                      "admissible|complete|grounded|preferred|stable")
      ->capture_default_str();
  control
      ->add_option("--mode", control_args.mode,
                   "credulous-accept|skeptical-accept|credulous-reject|"
                   "skeptical-reject")
      ->capture_default_str();

  CheckArgs check_args;
  auto* check = app.add_subcommand(
      "check", "Model-check coalition formulas at a state (.catl)");
  check->add_option("file", check_args.file, "System file")->required();
  check->add_option("--formula", check_args.formula, "One formula to check");
  check->add_option("--queries", check_args.queries_file,
                    "File with one formula per line ('%' comments)");
  check->add_option("--state", check_args.state,
                    "Evaluation state (defaults to the init state)");
  check->add_option("--zeta-policy", check_args.zeta_policy,
                    "Controllability policy as <semantics>:<mode>");
  check->add_flag("--witness", check_args.witness,
                  "After a coalition verdict, print the witnessing partial "
                  "action (or 'none'/'empty')");

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a joint-action script and print the trace (.catl)");
  simulate->add_option("file", simulate_args.file, "System file")->required();
  simulate
      ->add_option("--actions", simulate_args.actions,
                   "Script like \"1,1;2,1\": steps split by ';', one move "
                   "per agent split by ','")
      ->required();
  simulate->add_option("--state", simulate_args.state,
                       "Start state (defaults to the init state)");
  simulate->add_option("--zeta-policy", simulate_args.zeta_policy,
                       "Controllability policy as <semantics>:<mode>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  completions_args.verbose = verbose;
  completions_args.budget = budgets.completions;
  control_args.budgets = budgets;
  check_args.budgets = budgets;
  simulate_args.budgets = budgets;

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (completions->parsed()) return run_completions(completions_args);
    if (control->parsed()) return run_control(control_args);
    if (check->parsed()) return run_check(check_args);
    if (simulate->parsed()) return run_simulate(simulate_args);
  } catch (const CompletionBudgetExceeded& e) {
    report_error(e.what());
    return 3;
  } catch (const ConfigurationBudgetExceeded& e) {
    report_error(e.what());
    return 3;
  } catch (const Error& e) {
    report_error(e.what());
    return 2;
  }
  return 2;
}
