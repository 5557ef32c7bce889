#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "test_support.hpp"

using support::data_path;
using support::golden_path;
using support::read_file;
using support::run_cli;

namespace {

// Writes a scratch input file the tool can load; caller removes it.
std::string scratch_file(const std::string& name, const std::string& body) {
  std::string path = "/tmp/cafcoal_cli_" + std::to_string(getpid()) + "_" +
                     name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("solve enumerates extensions in canonical order") {
  auto r = run_cli({"solve", data_path("chain.apx")});
  CHECK(r.exit_code == 0);
  CHECK(r.out == read_file(golden_path("solve_chain_grounded.txt")));
  CHECK(r.err.empty());

  r = run_cli({"solve", data_path("mutual.apx"), "--semantics", "preferred"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == read_file(golden_path("solve_mutual_preferred.txt")));
}

TEST_CASE("solve answers acceptance queries with matching exit codes") {
  auto yes = run_cli({"solve", data_path("mutual.apx"), "--semantics",
                      "preferred", "--task", "CA", "--arg", "a"});
  CHECK(yes.exit_code == 0);
  CHECK(yes.out == "YES\n");

  auto no = run_cli({"solve", data_path("mutual.apx"), "--semantics",
                     "stable", "--task", "SA", "--arg", "a"});
  CHECK(no.exit_code == 1);
  CHECK(no.out == "NO\n");
}

TEST_CASE("solve reads tgf inputs by extension") {
  std::string path = scratch_file("chain.tgf", "a\nb\nc\n#\na b\nb c\n");
  auto r = run_cli({"solve", path});
  CHECK(r.exit_code == 0);
  CHECK(r.out == "{a, c}\n");
  std::remove(path.c_str());
}

TEST_CASE("solve truncates long enumerations with a marker") {
  auto r = run_cli({"solve", data_path("mutual.apx"), "--semantics",
                    "preferred", "--limit", "1"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == "{a}\n% truncated: showing 1 of 2 extensions\n");
}

TEST_CASE("solve usage errors exit 2 and keep stdout clean") {
  // EE with --arg is contradictory.
  auto r = run_cli({"solve", data_path("chain.apx"), "--arg", "a"});
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());

  // CA needs an argument.
  r = run_cli({"solve", data_path("chain.apx"), "--task", "CA"});
  CHECK(r.exit_code == 2);

  // Unknown semantics name.
  r = run_cli({"solve", data_path("chain.apx"), "--semantics", "bogus"});
  CHECK(r.exit_code == 2);

  // Unknown extension and missing file.
  r = run_cli({"solve", "/tmp/nope.xyz"});
  CHECK(r.exit_code == 2);
  r = run_cli({"solve", "/tmp/definitely_missing.apx"});
  CHECK(r.exit_code == 2);

  // Unknown flag is a usage error too.
  r = run_cli({"solve", data_path("chain.apx"), "--frobnicate"});
  CHECK(r.exit_code == 2);
}

TEST_CASE("parse diagnostics go to stderr with exit 2") {
  std::string path = scratch_file("bad.apx", "arg(a).\natt(a,zz).\n");
  auto r = run_cli({"solve", path});
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find(path + ":2:") != std::string::npos);
  CHECK(r.err.find("error:") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("completions counts and lists induced frameworks") {
  auto r = run_cli({"completions", data_path("worked.caf")});
  CHECK(r.exit_code == 0);
  CHECK(r.out == read_file(golden_path("completions_worked.txt")));

  r = run_cli({"completions", data_path("worked.caf"), "--verbose"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == read_file(golden_path("completions_worked_verbose.txt")));
}

TEST_CASE("control reports a witness configuration or none") {
  auto r = run_cli({"control", data_path("worked.caf"), "--target", "t",
                    "--semantics", "grounded", "--mode", "skeptical-accept"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == read_file(golden_path("control_worked.txt")));

  r = run_cli({"control", data_path("worked_nocontrol.caf"), "--target", "t"});
  CHECK(r.exit_code == 1);
  CHECK(r.out == read_file(golden_path("control_nocontrol.txt")));
}

TEST_CASE("control rejects unknown or non-fixed targets") {
  auto r = run_cli({"control", data_path("worked.caf"), "--target", "zz"});
  CHECK(r.exit_code == 2);
  r = run_cli({"control", data_path("worked.caf"), "--target", "u"});
  CHECK(r.exit_code == 2);
}

TEST_CASE("budget overruns exit 3") {
  auto r = run_cli({"completions", data_path("worked.caf"), "--verbose",
                    "--budget-completions", "2"});
  CHECK(r.exit_code == 3);
  CHECK_FALSE(r.err.empty());

  r = run_cli({"control", data_path("worked.caf"), "--target", "t",
               "--budget-configurations", "1"});
  CHECK(r.exit_code == 3);
}

TEST_CASE("check matches the worked coalition verdicts byte for byte") {
  auto r = run_cli({"check", data_path("sys1.catl"), "--formula", "<<1,2>> p",
                    "--witness"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == read_file(golden_path("check_sys1_12.txt")));
  CHECK(r.err.empty());

  r = run_cli({"check", data_path("sys1.catl"), "--formula", "<<1>> p"});
  CHECK(r.exit_code == 1);
  CHECK(r.out == read_file(golden_path("check_sys1_1.txt")));

  r = run_cli({"check", data_path("sys1.catl"), "--formula", "<<>> p"});
  CHECK(r.exit_code == 1);
  CHECK(r.out == read_file(golden_path("check_sys1_empty.txt")));
}

TEST_CASE("check evaluates from other states and zeta atoms") {
  auto r = run_cli({"check", data_path("sys1.catl"), "--formula", "p",
                    "--state", "q1"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == "q1 |= p : true\n");

  r = run_cli({"check", data_path("sys1.catl"), "--formula", "zeta(t)"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == "q0 |= zeta(t) : true\n");

  r = run_cli({"check", data_path("sys1.catl"), "--formula", "zeta(t)",
               "--zeta-policy", "grounded:skeptical-accept"});
  CHECK(r.exit_code == 0);

  r = run_cli({"check", data_path("sys1.catl"), "--formula", "zeta(t)",
               "--zeta-policy", "grounded"});
  CHECK(r.exit_code == 2);

  r = run_cli({"check", data_path("sys1.catl"), "--formula", "p",
               "--state", "q9"});
  CHECK(r.exit_code == 2);
}

TEST_CASE("check runs query files and needs exactly one input source") {
  std::string path = scratch_file("queries.txt",
                                  "% two queries\n\n<<1,2>> p\n<<1>> p\n");
  auto r = run_cli({"check", data_path("sys1.catl"), "--queries", path});
  CHECK(r.exit_code == 1);  // not all true
  CHECK(r.out ==
        "q0 |= <<1,2>> p : true\n"
        "q0 |= <<1>> p : false\n");
  std::remove(path.c_str());

  r = run_cli({"check", data_path("sys1.catl")});
  CHECK(r.exit_code == 2);

  std::string empty = scratch_file("empty.txt", "% nothing\n");
  r = run_cli({"check", data_path("sys1.catl"), "--queries", empty});
  CHECK(r.exit_code == 2);
  std::remove(empty.c_str());

  r = run_cli({"check", data_path("sys1.catl"), "--formula", "p &"});
  CHECK(r.exit_code == 2);
}

TEST_CASE("simulate prints the belief-update trace") {
  auto r = run_cli({"simulate", data_path("sys1_update.catl"), "--actions",
                    "1,1"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == read_file(golden_path("simulate_update.txt")));

  r = run_cli({"simulate", data_path("sys1_update.catl"), "--actions",
               "1,1;1,1"});
  CHECK(r.exit_code == 0);
  CHECK(r.out == read_file(golden_path("simulate_update.txt")) +
                     "2\tq1\t1\tp\t-\n");
}

TEST_CASE("simulate rejects malformed or illegal action scripts") {
  // Move out of range for agent 2 at q0.
  auto r = run_cli({"simulate", data_path("sys1_update.catl"), "--actions",
                    "1,7"});
  CHECK(r.exit_code == 2);
  CHECK_FALSE(r.err.empty());

  // Wrong arity.
  r = run_cli({"simulate", data_path("sys1_update.catl"), "--actions", "1"});
  CHECK(r.exit_code == 2);

  // Unparseable token.
  r = run_cli({"simulate", data_path("sys1_update.catl"), "--actions",
               "1,x"});
  CHECK(r.exit_code == 2);
}

TEST_CASE("runs are byte deterministic") {
  for (int i = 0; i < 2; ++i) {
    auto a = run_cli({"solve", data_path("mutual.apx"), "--semantics",
                      "complete"});
    auto b = run_cli({"solve", data_path("mutual.apx"), "--semantics",
                      "complete"});
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}

TEST_CASE("top level usage errors exit 2") {
  auto none = run_cli({});
  CHECK(none.exit_code == 2);
  auto unknown = run_cli({"frobnicate"});
  CHECK(unknown.exit_code == 2);
}
