#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cafcoal/af.hpp"
#include "cafcoal/errors.hpp"

namespace cafcoal {

// Argumentation framework split into a fixed part, an uncertain part and a
// control part. Arguments live in one global table (insertion order per
// part is preserved); attacks are typed by the relation they belong to:
//   fixed_attacks      over fixed+uncertain arguments, always present
//   uncertain_attacks  over fixed+uncertain arguments, may be absent
//   symmetric_attacks  unordered pairs over fixed+uncertain arguments,
//                      present in at least one direction
//   control_attacks    at least one control endpoint, switched on by
//                      selecting the control arguments involved
// The four relations are pairwise disjoint as sets of directed pairs.
class ControlFramework {
 public:
  enum class Part : std::uint8_t { Fixed, Uncertain, Control };

  std::size_t add_argument(std::string name, Part part);  // throws PartOverlap
  void add_fixed_attack(std::string_view src, std::string_view dst);
  void add_uncertain_attack(std::string_view src, std::string_view dst);
  // Returns false (and adds nothing) when the same unordered pair was
  // already declared; throws ReflexiveSymmetricAttack on src == dst.
  bool add_symmetric_attack(std::string_view src, std::string_view dst);
  void add_control_attack(std::string_view src, std::string_view dst);
  // Routes a plain attack declaration: control relation iff an endpoint is
  // a control argument, fixed relation otherwise.
  void add_attack_classified(std::string_view src, std::string_view dst);

  std::size_t argument_count() const { return names_.size(); }
  const std::string& argument_name(std::size_t i) const { return names_[i]; }
  Part part(std::size_t i) const { return parts_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool is_fixed(std::string_view name) const;

  const std::vector<std::size_t>& fixed_arguments() const { return fixed_; }
  const std::vector<std::size_t>& uncertain_arguments() const {
    return uncertain_;
  }
  const std::vector<std::size_t>& control_arguments() const {
    return control_;
  }

  using Attack = std::pair<std::size_t, std::size_t>;
  const std::vector<Attack>& fixed_attacks() const { return fixed_attacks_; }
  const std::vector<Attack>& uncertain_attacks() const {
    return uncertain_attacks_;
  }
  // Stored with the endpoints in declaration order; "forward" resolves to
  // first->second.
  const std::vector<Attack>& symmetric_attacks() const {
    return symmetric_attacks_;
  }
  const std::vector<Attack>& control_attacks() const {
    return control_attacks_;
  }

 private:
  std::size_t require_known(std::string_view name) const;
  void reserve_pair(std::size_t src, std::size_t dst);

  std::vector<std::string> names_;
  std::vector<Part> parts_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> fixed_, uncertain_, control_;
  std::vector<Attack> fixed_attacks_, uncertain_attacks_, symmetric_attacks_,
      control_attacks_;
  std::unordered_set<std::uint64_t> attack_keys_;
};

// One way the uncertainty can resolve: which uncertain arguments exist,
// which uncertain attacks (among those whose endpoints all exist) are kept,
// and a direction for every symmetric pair whose endpoints both exist.
// Entries for attacks/pairs with an absent endpoint are pinned to
// "off"/"Irrelevant", so equal completions compare equal and the completion
// space has no duplicates.
struct Completion {
  enum class SymDir : std::uint8_t { Forward, Backward, Both, Irrelevant };

  std::vector<std::uint8_t> uncertain_present;  // size |uncertain args|
  std::vector<std::uint8_t> uncertain_attack_on;  // size |uncertain attacks|
  std::vector<SymDir> symmetric_dir;              // size |symmetric pairs|
};

// Subset of the control arguments, by control-part insertion index.
struct Configuration {
  std::vector<std::uint8_t> selected;  // size |control args|
};

Configuration make_configuration(const ControlFramework& caf,
                                 const std::vector<std::string>& members);
std::vector<std::string> configuration_names(const ControlFramework& caf,
                                             const Configuration& config);

enum class TargetMode : std::uint8_t {
  CredulousAccept,
  SkepticalAccept,
  CredulousReject,
  SkepticalReject
};

std::optional<TargetMode> target_mode_from_string(std::string_view name);
std::string_view to_string(TargetMode mode);

// Acceptance goal for one fixed argument.
struct TargetQuery {
  std::string target;
  Semantics semantics = Semantics::Grounded;
  TargetMode mode = TargetMode::SkepticalAccept;
};

struct Budgets {
  std::uint64_t completions = std::uint64_t{1} << 20;
  std::uint64_t configurations = std::uint64_t{1} << 16;
};

// Exact number of distinct completions, saturated at 2^63 to keep budget
// comparisons safe.
std::uint64_t count_completions(const ControlFramework& caf);
std::uint64_t count_configurations(const ControlFramework& caf);

// Calls fn for every completion in the canonical order: uncertain-argument
// presence, then uncertain-attack presence, then symmetric directions
// (forward < backward < both), each axis counting with the first-declared
// element most significant and "absent" before "present". fn returns false
// to stop early; the function returns false iff it was stopped.
bool for_each_completion(const ControlFramework& caf,
                         const std::function<bool(const Completion&)>& fn);

// Materializes the full completion list; throws CompletionBudgetExceeded
// when the count is over budget.
std::vector<Completion> enumerate_completions(
    const ControlFramework& caf, std::uint64_t completion_budget);

// Plain framework for one completion plus one configuration: fixed
// arguments, then present uncertain arguments, then selected control
// arguments; attacks restricted to present endpoints. Throws
// ForeignCompletion / ForeignConfiguration when the shapes do not belong
// to this framework.
ArgumentationFramework induced_framework(const ControlFramework& caf,
                                         const Completion& completion,
                                         const Configuration& config);

// True iff the target query holds in the induced framework of every
// completion under the given configuration.
bool check_configuration(const ControlFramework& caf,
                         const Configuration& config, const TargetQuery& query,
                         const Budgets& budgets = {});

// Smallest configuration (cardinality, then lexicographic on control
// insertion indices) that makes the query hold in every completion, or
// nullopt when none exists. Throws the budget errors before any search.
std::optional<Configuration> find_controlling_configuration(
    const ControlFramework& caf, const TargetQuery& query,
    const Budgets& budgets = {});

}  // namespace cafcoal
