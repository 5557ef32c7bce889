#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "cafcoal/catl.hpp"
#include "cafcoal/formats.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace cafcoal;

namespace {

CafAtsSystem load_system(const std::string& name) {
  auto result = parse_catl_file(support::data_path(name));
  for (const auto& d : result.diagnostics)
    if (d.severity == DiagSeverity::Error)
      FAIL(format_diagnostic(d));
  REQUIRE(result.value.has_value());
  return std::move(*result.value);
}

Formula parse(const std::string& text) {
  auto result = parse_formula(text);
  REQUIRE(result.value.has_value());
  return std::move(*result.value);
}

// Successor states of all legal joint actions at `state`.
std::vector<std::size_t> successors(const CafAtsSystem& sys,
                                    std::size_t state) {
  std::vector<std::size_t> out;
  for (const auto& action : legal_joint_actions(sys, state))
    out.push_back(step(sys, state, action, sys.state_caf(state)).first);
  return out;
}

}  // namespace

TEST_CASE("formulas are structural values") {
  Formula p = Formula::prop("p");
  Formula q = Formula::prop("q");
  CHECK(p == Formula::prop("p"));
  CHECK_FALSE(p == q);
  CHECK_FALSE(Formula::negation(p) == p);
  // Conjunction children are ordered.
  CHECK_FALSE(Formula::conjunction(p, q) == Formula::conjunction(q, p));
  CHECK(Formula::conjunction(p, q) == Formula::conjunction(p, q));
  // Coalition agent lists are sorted and deduplicated.
  Formula c1 = Formula::coalition({2, 1, 2}, p);
  Formula c2 = Formula::coalition({1, 2}, p);
  CHECK(c1 == c2);
  CHECK(c1.agents() == std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("system validation rejects broken inputs") {
  CafAtsSystem::Data data;
  data.agent_count = 1;
  data.states = {"q0"};
  data.init_state = 0;
  data.labels = {{}};
  data.move_counts = {{2}};
  data.transitions[{0, {1}}] = 0;
  // Missing transition for move 2.
  ControlFramework caf;
  caf.add_argument("t", ControlFramework::Part::Fixed);
  data.cafs.push_back(caf);
  data.caf_paths = {""};
  data.state_caf = {0};
  CHECK_THROWS_AS(CafAtsSystem::create(data), MissingTransition);
  data.transitions[{0, {2}}] = 0;
  CHECK_NOTHROW(CafAtsSystem::create(data));
}

TEST_CASE("legal joint actions enumerate the full product in order") {
  CafAtsSystem sys = load_system("sys1.catl");
  auto actions = legal_joint_actions(sys, sys.init_state());
  std::vector<JointAction> expected = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  CHECK(actions == expected);
}

TEST_CASE("coalition verdicts on the two-agent meeting system") {
  CafAtsSystem sys = load_system("sys1.catl");
  std::size_t q0 = sys.init_state();

  CHECK(satisfies(sys, q0, parse("<<1,2>> p")));
  CHECK_FALSE(satisfies(sys, q0, parse("<<1>> p")));
  CHECK_FALSE(satisfies(sys, q0, parse("<<2>> p")));
  CHECK_FALSE(satisfies(sys, q0, parse("<<>> p")));

  auto witness = witness_coalition_action(sys, q0, {1, 2}, parse("p"));
  REQUIRE(witness.has_value());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> expected = {{1, 1},
                                                                   {2, 1}};
  CHECK(witness->moves == expected);
  CHECK_FALSE(
      witness_coalition_action(sys, q0, {1}, parse("p")).has_value());
}

TEST_CASE("one step leaves the static framework in place under identity") {
  CafAtsSystem sys = load_system("sys1.catl");
  auto [next, caf] = step(sys, sys.init_state(), {1, 1}, 0);
  CHECK(sys.states()[next] == "q1");
  CHECK(caf == 0);
}

TEST_CASE("zeta reads the framework bound to the state") {
  CafAtsSystem sys = load_system("sys1.catl");
  std::size_t q0 = sys.init_state();
  // The bound framework's target is controllable (select c), so zeta holds.
  CHECK(eval_zeta(sys, q0, "t"));
  CHECK(satisfies(sys, q0, parse("zeta(t)")));
  // Only fixed arguments of the bound framework are zeta atoms.
  CHECK_THROWS_AS(eval_zeta(sys, q0, "u"), UnknownArgument);
  CHECK_THROWS_AS(eval_zeta(sys, q0, "missing"), UnknownArgument);
}

TEST_CASE("zeta agrees with direct controllability under any policy") {
  CafAtsSystem sys = load_system("sys1.catl");
  std::size_t q0 = sys.init_state();
  for (Semantics semantics : {Semantics::Grounded, Semantics::Stable,
                              Semantics::Preferred}) {
    for (TargetMode mode : {TargetMode::SkepticalAccept,
                            TargetMode::CredulousAccept,
                            TargetMode::SkepticalReject}) {
      sys.set_zeta_policy({semantics, mode});
      TargetQuery query{"t", semantics, mode};
      bool direct =
          find_controlling_configuration(sys.cafs()[sys.state_caf(q0)], query)
              .has_value();
      CHECK(eval_zeta(sys, q0, "t") == direct);
      // Ask twice: the memo must be invisible.
      CHECK(eval_zeta(sys, q0, "t") == direct);
    }
  }
}

TEST_CASE("unknown names raise typed errors") {
  CafAtsSystem sys = load_system("sys1.catl");
  CHECK_THROWS_AS(sys.require_state("q9"), UnknownState);
  CHECK_THROWS_AS(satisfies(sys, sys.init_state(), parse("r")),
                  UnknownProposition);
  CHECK_THROWS_AS(
      witness_coalition_action(sys, sys.init_state(), {7}, parse("p")),
      UnknownAgent);
}

TEST_CASE("simulation runs the update map and flips zeta") {
  CafAtsSystem sys = load_system("sys1_update.catl");
  auto trace = simulate(sys, sys.init_state(), {{1, 1}, {1, 1}});
  REQUIRE(trace.size() == 3);

  CHECK(trace[0].step == 0);
  CHECK(trace[0].state == "q0");
  CHECK(trace[0].caf_index == 0);
  CHECK(trace[0].props.empty());
  CHECK(trace[0].zeta_true == std::vector<std::string>{"t"});

  // The joint action (1,1) swaps in the framework whose target cannot be
  // defended, so zeta(t) flips from true to false.
  CHECK(trace[1].step == 1);
  CHECK(trace[1].state == "q1");
  CHECK(trace[1].caf_index == 1);
  CHECK(trace[1].props == std::vector<std::string>{"p"});
  CHECK(trace[1].zeta_true.empty());

  CHECK(trace[2].state == "q1");
  CHECK(trace[2].caf_index == 1);
}

TEST_CASE("illegal moves report the failing one-based step") {
  CafAtsSystem sys = load_system("sys1.catl");
  try {
    simulate(sys, sys.init_state(), {{1, 1}, {9, 1}});
    FAIL("expected IllegalMove");
  } catch (const IllegalMove& e) {
    CHECK(e.step() == 2);
  }
  try {
    simulate(sys, sys.init_state(), {{1}});
    FAIL("expected IllegalMove");
  } catch (const IllegalMove& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("empty and full coalitions quantify over successors") {
  std::mt19937 rng(43);
  for (int i = 0; i < 40; ++i) {
    CafAtsSystem sys = oracle::random_system(rng);
    Formula body = oracle::random_formula(rng, sys.agent_count(), 2);
    std::vector<std::uint32_t> everyone;
    for (std::uint32_t a = 1; a <= sys.agent_count(); ++a)
      everyone.push_back(a);

    for (std::size_t q = 0; q < sys.states().size(); ++q) {
      bool all = true, some = false;
      for (std::size_t next : successors(sys, q)) {
        bool holds = satisfies(sys, next, body);
        all &= holds;
        some |= holds;
      }
      CHECK(satisfies(sys, q, Formula::coalition({}, body)) == all);
      CHECK(satisfies(sys, q, Formula::coalition(everyone, body)) == some);
    }
  }
}

TEST_CASE("coalition ability is monotone in the coalition") {
  std::mt19937 rng(47);
  for (int i = 0; i < 40; ++i) {
    CafAtsSystem sys = oracle::random_system(rng);
    Formula body = oracle::random_formula(rng, sys.agent_count(), 2);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<std::uint32_t> smaller, larger;
    for (std::uint32_t a = 1; a <= sys.agent_count(); ++a) {
      bool in_large = coin(rng) == 1;
      if (in_large) {
        larger.push_back(a);
        if (coin(rng) == 1) smaller.push_back(a);
      }
    }
    for (std::size_t q = 0; q < sys.states().size(); ++q)
      if (satisfies(sys, q, Formula::coalition(smaller, body)))
        CHECK(satisfies(sys, q, Formula::coalition(larger, body)));
  }
}

TEST_CASE("implication is global, hence state-independent") {
  std::mt19937 rng(53);
  for (int i = 0; i < 40; ++i) {
    CafAtsSystem sys = oracle::random_system(rng);
    Formula lhs = oracle::random_formula(rng, sys.agent_count(), 2);
    Formula rhs = oracle::random_formula(rng, sys.agent_count(), 2);
    Formula implies = Formula::implication(lhs, rhs);

    bool at_zero = satisfies(sys, 0, implies);
    bool pointwise = true;
    for (std::size_t q = 0; q < sys.states().size(); ++q)
      pointwise &= !satisfies(sys, q, lhs) || satisfies(sys, q, rhs);
    CHECK(at_zero == pointwise);
    for (std::size_t q = 1; q < sys.states().size(); ++q)
      CHECK(satisfies(sys, q, implies) == at_zero);
  }
}

TEST_CASE("witness search follows the documented candidate order") {
  // Two agents, two moves each. Only actions where agent 2 plays 2 reach
  // the goal, so for coalition {2} the witness must be move 2; for the
  // grand coalition it must be the lexicographically first good pair.
  CafAtsSystem::Data data;
  data.agent_count = 2;
  data.states = {"s0", "good", "bad"};
  data.init_state = 0;
  data.propositions = {"g"};
  data.labels = {{}, {0}, {}};
  data.move_counts = {{2, 2}, {1, 1}, {1, 1}};
  for (std::uint32_t m1 = 1; m1 <= 2; ++m1)
    for (std::uint32_t m2 = 1; m2 <= 2; ++m2)
      data.transitions[{0, {m1, m2}}] = m2 == 2 ? 1 : 2;
  data.transitions[{1, {1, 1}}] = 1;
  data.transitions[{2, {1, 1}}] = 2;
  ControlFramework caf;
  caf.add_argument("f0", ControlFramework::Part::Fixed);
  data.cafs.push_back(caf);
  data.caf_paths = {""};
  data.state_caf = {0, 0, 0};
  CafAtsSystem sys = CafAtsSystem::create(std::move(data));

  Formula goal = Formula::prop("g");
  auto w2 = witness_coalition_action(sys, 0, {2}, goal);
  REQUIRE(w2.has_value());
  CHECK(w2->moves ==
        std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 2}});
  auto w12 = witness_coalition_action(sys, 0, {1, 2}, goal);
  REQUIRE(w12.has_value());
  CHECK(w12->moves ==
        std::vector<std::pair<std::uint32_t, std::uint32_t>>{{1, 1}, {2, 2}});
  CHECK_FALSE(witness_coalition_action(sys, 0, {1}, goal).has_value());
}
