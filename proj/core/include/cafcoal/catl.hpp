#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cafcoal/caf.hpp"
#include "cafcoal/errors.hpp"

namespace cafcoal {

// Formula AST. Stores only the core connectives: propositions, zeta atoms,
// negation, conjunction, (global) implication and coalition modalities.
// Disjunction is desugared by the parser. Immutable value type sharing
// subtrees.
class Formula {
 public:
  enum class Kind : std::uint8_t { Prop, Zeta, Not, And, Implies, Coalition };

  static Formula prop(std::string token);
  static Formula zeta(std::string argument);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  // Agents are 1-based and stored sorted without duplicates.
  static Formula coalition(std::vector<std::uint32_t> agents, Formula body);

  Kind kind() const;
  const std::string& token() const;          // Prop / Zeta
  const std::vector<std::uint32_t>& agents() const;  // Coalition
  Formula child() const;                     // Not / Coalition
  Formula lhs() const;                       // And / Implies
  Formula rhs() const;                       // And / Implies

  bool operator==(const Formula& other) const;  // structural

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
  friend struct FormulaAccess;
};

struct ZetaPolicy {
  Semantics semantics = Semantics::Stable;
  TargetMode mode = TargetMode::SkepticalAccept;
};

// Joint action: one 1-based move index per agent, agent i at position i-1.
using JointAction = std::vector<std::uint32_t>;

// Moves for the members of a coalition only; agents ascending.
struct PartialJointAction {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> moves;  // (agent, move)
};

struct TraceRecord {
  std::size_t step = 0;  // 0 is the initial record
  std::string state;
  std::uint32_t caf_index = 0;
  std::vector<std::string> props;      // sorted
  std::vector<std::string> zeta_true;  // sorted fixed args of caf_index
};

// One-step game structure over named states with per-(state, agent) move
// counts, a total deterministic transition function, a family of control
// frameworks, a static state->framework binding for evaluation and a
// framework-update map keyed by (framework, action shape) for simulation.
class CafAtsSystem {
 public:
  struct Data {
    std::uint32_t agent_count = 0;
    std::vector<std::string> states;
    std::size_t init_state = 0;
    std::vector<std::string> propositions;
    std::vector<std::vector<std::uint32_t>> labels;  // per state: prop indices
    std::vector<std::vector<std::uint32_t>> move_counts;  // [state][agent-1]
    std::map<std::pair<std::uint32_t, JointAction>, std::uint32_t> transitions;
    std::vector<ControlFramework> cafs;
    std::vector<std::string> caf_paths;  // reference names, may be empty
    std::map<std::pair<std::uint32_t, JointAction>, std::uint32_t> upsilon;
    std::vector<std::uint32_t> state_caf;  // per state; defaults to 0
    ZetaPolicy zeta_policy;
  };

  // Validates totality, move-count bounds and index ranges; throws Error
  // subtypes on violations.
  static CafAtsSystem create(Data data);

  std::uint32_t agent_count() const { return data_.agent_count; }
  const std::vector<std::string>& states() const { return data_.states; }
  std::size_t init_state() const { return data_.init_state; }
  std::optional<std::size_t> state_index(std::string_view name) const;
  std::size_t require_state(std::string_view name) const;  // UnknownState
  const std::vector<std::string>& propositions() const {
    return data_.propositions;
  }
  bool has_label(std::size_t state, std::size_t prop) const;
  const std::vector<std::uint32_t>& labels_of(std::size_t state) const {
    return data_.labels[state];
  }
  std::uint32_t move_count(std::size_t state, std::uint32_t agent) const;
  const std::vector<ControlFramework>& cafs() const { return data_.cafs; }
  const std::vector<std::string>& caf_paths() const { return data_.caf_paths; }
  std::uint32_t state_caf(std::size_t state) const {
    return data_.state_caf[state];
  }
  const std::map<std::pair<std::uint32_t, JointAction>, std::uint32_t>&
  upsilon_entries() const {
    return data_.upsilon;
  }
  const std::map<std::pair<std::uint32_t, JointAction>, std::uint32_t>&
  transitions() const {
    return data_.transitions;
  }

  const ZetaPolicy& zeta_policy() const { return data_.zeta_policy; }
  void set_zeta_policy(ZetaPolicy policy);  // clears the zeta cache
  const Budgets& budgets() const { return budgets_; }
  void set_budgets(Budgets budgets);  // clears the zeta cache

  // Controllability of one fixed argument of cafs()[caf_index] under the
  // zeta policy; memoized per (caf index, argument index). The cache is
  // semantically invisible and guarded for concurrent readers.
  bool zeta_controlled(std::uint32_t caf_index, std::size_t fixed_pos) const;

 private:
  // The memo lives behind a pointer so the system stays movable; the mutex
  // guards it for concurrent zeta_controlled calls.
  struct ZetaCache {
    std::mutex mutex;
    std::map<std::pair<std::uint32_t, std::size_t>, bool> entries;
  };

  CafAtsSystem() : cache_(std::make_unique<ZetaCache>()) {}
  Data data_;
  Budgets budgets_;
  std::unique_ptr<ZetaCache> cache_;
};

// Full action product at a state, lexicographic with agent 1 most
// significant; moves run 1..move_count.
std::vector<JointAction> legal_joint_actions(const CafAtsSystem& sys,
                                             std::size_t state);

// Successor state and updated framework index; the update map defaults to
// identity for unlisted (framework, shape) pairs.
std::pair<std::size_t, std::uint32_t> step(const CafAtsSystem& sys,
                                           std::size_t state,
                                           const JointAction& action,
                                           std::uint32_t caf_index);

// Controllability of `argument` in the framework statically bound to
// `state`, under the system's zeta policy.
bool eval_zeta(const CafAtsSystem& sys, std::size_t state,
               std::string_view argument);

// Satisfaction at a state. Implication is global: lhs -> rhs holds iff at
// every state of the system lhs implies rhs, so its value is
// state-independent by construction.
bool satisfies(const CafAtsSystem& sys, std::size_t state, const Formula& f);

// First (lexicographic over the ascending coalition) partial joint action
// whose every compatible full action leads to a state satisfying `body`,
// or nullopt. satisfies(<<agents>> body) is true iff this is non-empty.
std::optional<PartialJointAction> witness_coalition_action(
    const CafAtsSystem& sys, std::size_t state,
    const std::vector<std::uint32_t>& agents, const Formula& body);

// Runs a script of joint actions from `state`. The framework index starts
// at state_caf(state) and evolves by the update map, overriding the static
// binding from the first step on. Throws IllegalMove with the 1-based
// failing step index.
std::vector<TraceRecord> simulate(const CafAtsSystem& sys, std::size_t state,
                                  const std::vector<JointAction>& script);

}  // namespace cafcoal
