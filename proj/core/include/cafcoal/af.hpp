#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cafcoal/errors.hpp"

namespace cafcoal {

// Set of argument indices, stored as a bit vector with a fixed bit count.
// Used for extensions and for the intermediate sets of the fixpoint and
// enumeration routines.
class ArgSet {
 public:
  ArgSet() = default;
  explicit ArgSet(std::size_t bit_count);

  std::size_t bit_count() const { return bits_; }
  bool test(std::size_t i) const;
  void set(std::size_t i, bool value = true);
  void reset(std::size_t i) { set(i, false); }
  std::size_t count() const;
  bool none() const;
  bool is_subset_of(const ArgSet& other) const;
  bool intersects(const ArgSet& other) const;
  ArgSet& operator|=(const ArgSet& other);

  bool operator==(const ArgSet& other) const = default;

  // Members as ascending indices.
  std::vector<std::size_t> members() const;

  // Canonical order used everywhere extensions are emitted: smaller
  // cardinality first, ties broken lexicographically on the ascending
  // index sequence.
  static bool canonical_less(const ArgSet& a, const ArgSet& b);

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

enum class Semantics { Admissible, Complete, Grounded, Preferred, Stable };

std::optional<Semantics> semantics_from_string(std::string_view name);
std::string_view to_string(Semantics semantics);

enum class AcceptanceMode { Credulous, Skeptical };

// Finite directed attack graph over named arguments. Immutable once built;
// the argument iteration order is the insertion order, which all
// deterministic-output contracts rely on.
class ArgumentationFramework {
 public:
  std::size_t add_argument(std::string name);  // throws DuplicateArgument
  void add_attack(std::size_t src, std::size_t dst);
  void add_attack(std::string_view src, std::string_view dst);

  std::size_t argument_count() const { return names_.size(); }
  const std::vector<std::string>& argument_names() const { return names_; }
  const std::string& argument_name(std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t require_index(std::string_view name) const;  // MemberNotInFramework

  bool has_attack(std::size_t src, std::size_t dst) const;
  const std::vector<std::pair<std::size_t, std::size_t>>& attacks() const {
    return attack_list_;
  }
  const std::vector<std::size_t>& attackers_of(std::size_t i) const {
    return attackers_[i];
  }
  const std::vector<std::size_t>& targets_of(std::size_t i) const {
    return targets_[i];
  }

  ArgSet empty_set() const { return ArgSet(names_.size()); }
  ArgSet make_set(const std::vector<std::string>& members) const;
  std::vector<std::string> names_of(const ArgSet& set) const;

  // "{a, c}" with members in insertion-index order.
  std::string format_extension(const ArgSet& set) const;

 private:
  void check_index(std::size_t i) const;
  void check_set(const ArgSet& set) const;

  friend bool is_conflict_free(const ArgumentationFramework&, const ArgSet&);
  friend bool is_acceptable(const ArgumentationFramework&, const ArgSet&,
                            std::size_t);
  friend ArgSet characteristic_step(const ArgumentationFramework&,
                                    const ArgSet&);
  friend bool is_accepted(const ArgumentationFramework&, std::size_t,
                          Semantics, AcceptanceMode);

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::pair<std::size_t, std::size_t>> attack_list_;
  std::vector<std::vector<std::size_t>> attackers_;
  std::vector<std::vector<std::size_t>> targets_;
  std::unordered_set<std::uint64_t> attack_keys_;
};

// No two members attack each other (self-attacks included).
bool is_conflict_free(const ArgumentationFramework& af, const ArgSet& set);
bool is_conflict_free(const ArgumentationFramework& af,
                      const std::vector<std::string>& members);

// Every attacker of `argument` is attacked by some member of `set`.
bool is_acceptable(const ArgumentationFramework& af, const ArgSet& set,
                   std::size_t argument);
bool is_acceptable(const ArgumentationFramework& af,
                   const std::vector<std::string>& members,
                   std::string_view argument);

// One application of the defense operator: all arguments acceptable with
// respect to `set`.
ArgSet characteristic_step(const ArgumentationFramework& af,
                           const ArgSet& set);

// Least fixpoint of the defense operator, reached from the empty set in at
// most argument_count() rounds.
ArgSet grounded_extension(const ArgumentationFramework& af);

// All extensions under the given semantics, in canonical order
// (cardinality, then lexicographic on insertion indices). Grounded yields
// exactly one extension.
std::vector<ArgSet> enumerate_extensions(const ArgumentationFramework& af,
                                         Semantics semantics);

// Credulous: member of some extension. Skeptical: member of every
// extension, vacuously true when there are none.
bool is_accepted(const ArgumentationFramework& af, std::size_t argument,
                 Semantics semantics, AcceptanceMode mode);
bool is_accepted(const ArgumentationFramework& af, std::string_view argument,
                 Semantics semantics, AcceptanceMode mode);

}  // namespace cafcoal
