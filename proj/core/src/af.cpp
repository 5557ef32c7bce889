#include "cafcoal/af.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace cafcoal {

namespace {

constexpr std::size_t kWordBits = 64;

std::uint64_t pair_key(std::size_t src, std::size_t dst) {
  return (static_cast<std::uint64_t>(src) << 32) | static_cast<std::uint32_t>(dst);
}

}  // namespace

ArgSet::ArgSet(std::size_t bit_count)
    : bits_(bit_count), words_((bit_count + kWordBits - 1) / kWordBits, 0) {}

bool ArgSet::test(std::size_t i) const {
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
}

void ArgSet::set(std::size_t i, bool value) {
  std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
  if (value)
    words_[i / kWordBits] |= mask;
  else
    words_[i / kWordBits] &= ~mask;
}

std::size_t ArgSet::count() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

bool ArgSet::none() const {
  for (std::uint64_t w : words_)
    if (w) return false;
  return true;
}

bool ArgSet::is_subset_of(const ArgSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~other.words_[i]) return false;
  return true;
}

bool ArgSet::intersects(const ArgSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

ArgSet& ArgSet::operator|=(const ArgSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

std::vector<std::size_t> ArgSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_; ++i)
    if (test(i)) out.push_back(i);
  return out;
}

bool ArgSet::canonical_less(const ArgSet& a, const ArgSet& b) {
  std::size_t ca = a.count(), cb = b.count();
  if (ca != cb) return ca < cb;
  // Equal cardinality: lexicographic on ascending member indices, which is
  // the same as finding the lowest bit where the sets differ and ordering
  // the one holding it first.
  auto ma = a.members(), mb = b.members();
  return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(),
                                      mb.end());
}

std::optional<Semantics> semantics_from_string(std::string_view name) {
  if (name == "admissible") return Semantics::Admissible;
  if (name == "complete") return Semantics::Complete;
  if (name == "grounded") return Semantics::Grounded;
  if (name == "preferred") return Semantics::Preferred;
  if (name == "stable") return Semantics::Stable;
  return std::nullopt;
}

std::string_view to_string(Semantics semantics) {
  switch (semantics) {
    case Semantics::Admissible: return "admissible";
    case Semantics::Complete: return "complete";
    case Semantics::Grounded: return "grounded";
    case Semantics::Preferred: return "preferred";
    case Semantics::Stable: return "stable";
  }
  return "?";
}

std::size_t ArgumentationFramework::add_argument(std::string name) {
  if (index_.count(name))
    throw DuplicateArgument("argument '" + name + "' declared twice");
  std::size_t id = names_.size();
  index_.emplace(name, id);
  names_.push_back(std::move(name));
  attackers_.emplace_back();
  targets_.emplace_back();
  return id;
}

void ArgumentationFramework::add_attack(std::size_t src, std::size_t dst) {
  check_index(src);
  check_index(dst);
  if (has_attack(src, dst)) return;  // idempotent
  attack_keys_.insert(pair_key(src, dst));
  attack_list_.emplace_back(src, dst);
  targets_[src].push_back(dst);
  attackers_[dst].push_back(src);
}

void ArgumentationFramework::add_attack(std::string_view src,
                                        std::string_view dst) {
  add_attack(require_index(src), require_index(dst));
}

std::optional<std::size_t> ArgumentationFramework::index_of(
    std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ArgumentationFramework::require_index(std::string_view name) const {
  auto idx = index_of(name);
  if (!idx)
    throw MemberNotInFramework("argument '" + std::string(name) +
                               "' is not in the framework");
  return *idx;
}

bool ArgumentationFramework::has_attack(std::size_t src,
                                        std::size_t dst) const {
  return attack_keys_.count(pair_key(src, dst)) != 0;
}

ArgSet ArgumentationFramework::make_set(
    const std::vector<std::string>& members) const {
  ArgSet set = empty_set();
  for (const auto& name : members) set.set(require_index(name));
  return set;
}

std::vector<std::string> ArgumentationFramework::names_of(
    const ArgSet& set) const {
  check_set(set);
  std::vector<std::string> out;
  for (std::size_t i : set.members()) out.push_back(names_[i]);
  return out;
}

std::string ArgumentationFramework::format_extension(const ArgSet& set) const {
  check_set(set);
  std::string out = "{";
  bool first = true;
  for (std::size_t i : set.members()) {
    if (!first) out += ", ";
    out += names_[i];
    first = false;
  }
  out += "}";
  return out;
}

void ArgumentationFramework::check_index(std::size_t i) const {
  if (i >= names_.size())
    throw MemberNotInFramework("argument index " + std::to_string(i) +
                               " is out of range");
}

void ArgumentationFramework::check_set(const ArgSet& set) const {
  if (set.bit_count() != names_.size())
    throw MemberNotInFramework(
        "argument set does not belong to this framework");
}

bool is_conflict_free(const ArgumentationFramework& af, const ArgSet& set) {
  af.check_set(set);
  for (std::size_t i : set.members())
    for (std::size_t t : af.targets_[i])
      if (set.test(t)) return false;
  return true;
}

bool is_conflict_free(const ArgumentationFramework& af,
                      const std::vector<std::string>& members) {
  return is_conflict_free(af, af.make_set(members));
}

bool is_acceptable(const ArgumentationFramework& af, const ArgSet& set,
                   std::size_t argument) {
  af.check_set(set);
  af.check_index(argument);
  for (std::size_t attacker : af.attackers_[argument]) {
    bool countered = false;
    for (std::size_t defender : af.attackers_[attacker]) {
      if (set.test(defender)) {
        countered = true;
        break;
      }
    }
    if (!countered) return false;
  }
  return true;
}

bool is_acceptable(const ArgumentationFramework& af,
                   const std::vector<std::string>& members,
                   std::string_view argument) {
  return is_acceptable(af, af.make_set(members), af.require_index(argument));
}

ArgSet characteristic_step(const ArgumentationFramework& af,
                           const ArgSet& set) {
  af.check_set(set);
  ArgSet out = af.empty_set();
  for (std::size_t i = 0; i < af.argument_count(); ++i)
    if (is_acceptable(af, set, i)) out.set(i);
  return out;
}

ArgSet grounded_extension(const ArgumentationFramework& af) {
  ArgSet current = af.empty_set();
  for (;;) {
    ArgSet next = characteristic_step(af, current);
    if (next == current) return current;
    current = std::move(next);
  }
}

namespace {

// Complete-labelling search. Labels are assigned in argument order; each
// assignment is checked against the already-labelled attackers and targets,
// which keeps the tree small, and full constraints are re-verified at the
// leaves so the pruning only ever has to be sound, not complete.
enum Lab : std::uint8_t { kUnset, kIn, kOut, kUndec };

class CompleteSearch {
 public:
  explicit CompleteSearch(const ArgumentationFramework& af)
      : af_(af), labels_(af.argument_count(), kUnset) {}

  // Collects (extension, has_undec) pairs.
  std::vector<std::pair<ArgSet, bool>> run() {
    recurse(0);
    return std::move(found_);
  }

 private:
  bool locally_consistent(std::size_t a) const {
    Lab la = labels_[a];
    if (la == kIn) {
      for (std::size_t b : af_.attackers_of(a))
        if (labels_[b] == kIn || labels_[b] == kUndec) return false;
    } else if (la == kOut) {
      bool witness_possible = false;
      for (std::size_t b : af_.attackers_of(a)) {
        if (labels_[b] == kIn || labels_[b] == kUnset) {
          witness_possible = true;
          break;
        }
      }
      if (!witness_possible) return false;
    } else {  // kUndec
      bool undec_possible = false;
      for (std::size_t b : af_.attackers_of(a)) {
        if (labels_[b] == kIn) return false;
        if (labels_[b] == kUndec || labels_[b] == kUnset)
          undec_possible = true;
      }
      if (!undec_possible) return false;
    }
    // Forward constraints on already-labelled targets.
    for (std::size_t t : af_.targets_of(a)) {
      if (labels_[t] == kIn && la != kOut) return false;
      if (labels_[t] == kUndec && la == kIn) return false;
    }
    return true;
  }

  bool is_complete_labelling() const {
    for (std::size_t a = 0; a < labels_.size(); ++a) {
      bool some_in = false, some_undec = false, all_out = true;
      for (std::size_t b : af_.attackers_of(a)) {
        if (labels_[b] == kIn) some_in = true;
        if (labels_[b] == kUndec) some_undec = true;
        if (labels_[b] != kOut) all_out = false;
      }
      switch (labels_[a]) {
        case kIn:
          if (!all_out) return false;
          break;
        case kOut:
          if (!some_in) return false;
          break;
        case kUndec:
          if (some_in || !some_undec) return false;
          break;
        default:
          return false;
      }
    }
    return true;
  }

  void recurse(std::size_t next) {
    if (next == labels_.size()) {
      if (!is_complete_labelling()) return;
      ArgSet ext = af_.empty_set();
      bool has_undec = false;
      for (std::size_t a = 0; a < labels_.size(); ++a) {
        if (labels_[a] == kIn) ext.set(a);
        if (labels_[a] == kUndec) has_undec = true;
      }
      found_.emplace_back(std::move(ext), has_undec);
      return;
    }
    for (Lab lab : {kIn, kOut, kUndec}) {
      labels_[next] = lab;
      if (locally_consistent(next)) recurse(next + 1);
    }
    labels_[next] = kUnset;
  }

  const ArgumentationFramework& af_;
  std::vector<Lab> labels_;
  std::vector<std::pair<ArgSet, bool>> found_;
};

// Admissible-set search: include/exclude each argument in order, keeping
// the running set conflict-free and tracking the attackers of members that
// still lack a counterattack. A branch dies as soon as some such attacker
// can no longer be answered by the remaining candidates.
class AdmissibleSearch {
 public:
  explicit AdmissibleSearch(const ArgumentationFramework& af) : af_(af) {}

  std::vector<ArgSet> run() {
    recurse(0, af_.empty_set(), af_.empty_set());
    return std::move(found_);
  }

 private:
  bool pending_answerable(const ArgSet& pending, const ArgSet& in,
                          std::size_t next) const {
    for (std::size_t b : pending.members()) {
      bool answerable = false;
      for (std::size_t c : af_.attackers_of(b)) {
        if (in.test(c) || c >= next) {
          answerable = true;
          break;
        }
      }
      if (!answerable) return false;
    }
    return true;
  }

  void recurse(std::size_t next, ArgSet in, ArgSet pending) {
    if (!pending_answerable(pending, in, next)) return;
    if (next == af_.argument_count()) {
      if (pending.none()) found_.push_back(in);
      return;
    }
    recurse(next + 1, in, pending);  // exclude

    // Include, when conflict-freeness survives.
    if (af_.has_attack(next, next)) return;
    for (std::size_t m : in.members())
      if (af_.has_attack(next, m) || af_.has_attack(m, next)) return;
    in.set(next);
    // New member: its unanswered attackers become pending...
    for (std::size_t b : af_.attackers_of(next)) {
      bool answered = false;
      for (std::size_t c : af_.attackers_of(b)) {
        if (in.test(c)) {
          answered = true;
          break;
        }
      }
      if (!answered) pending.set(b);
    }
    // ...and everything `next` attacks is answered now.
    for (std::size_t t : af_.targets_of(next)) pending.reset(t);
    recurse(next + 1, in, pending);
  }

  const ArgumentationFramework& af_;
  std::vector<ArgSet> found_;
};

std::vector<ArgSet> sorted_canonical(std::vector<ArgSet> sets) {
  std::sort(sets.begin(), sets.end(), ArgSet::canonical_less);
  return sets;
}

}  // namespace

std::vector<ArgSet> enumerate_extensions(const ArgumentationFramework& af,
                                         Semantics semantics) {
  switch (semantics) {
    case Semantics::Grounded:
      return {grounded_extension(af)};
    case Semantics::Admissible:
      return sorted_canonical(AdmissibleSearch(af).run());
    default:
      break;
  }
  auto completes = CompleteSearch(af).run();
  std::vector<ArgSet> out;
  if (semantics == Semantics::Complete) {
    for (auto& [ext, has_undec] : completes) out.push_back(std::move(ext));
  } else if (semantics == Semantics::Stable) {
    for (auto& [ext, has_undec] : completes)
      if (!has_undec) out.push_back(std::move(ext));
  } else {  // Preferred: maximal complete extensions
    for (std::size_t i = 0; i < completes.size(); ++i) {
      bool maximal = true;
      for (std::size_t j = 0; j < completes.size(); ++j) {
        if (i != j && completes[i].first.is_subset_of(completes[j].first) &&
            completes[i].first != completes[j].first) {
          maximal = false;
          break;
        }
      }
      if (maximal) out.push_back(completes[i].first);
    }
  }
  return sorted_canonical(std::move(out));
}

bool is_accepted(const ArgumentationFramework& af, std::size_t argument,
                 Semantics semantics, AcceptanceMode mode) {
  af.check_index(argument);
  auto extensions = enumerate_extensions(af, semantics);
  if (mode == AcceptanceMode::Credulous) {
    for (const auto& ext : extensions)
      if (ext.test(argument)) return true;
    return false;
  }
  // Skeptical: vacuously true over an empty extension set.
  for (const auto& ext : extensions)
    if (!ext.test(argument)) return false;
  return true;
}

bool is_accepted(const ArgumentationFramework& af, std::string_view argument,
                 Semantics semantics, AcceptanceMode mode) {
  return is_accepted(af, af.require_index(argument), semantics, mode);
}

}  // namespace cafcoal
