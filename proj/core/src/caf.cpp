#include "cafcoal/caf.hpp"

#include <algorithm>
#include <bit>

namespace cafcoal {

namespace {

std::uint64_t pair_key(std::size_t src, std::size_t dst) {
  return (static_cast<std::uint64_t>(src) << 32) |
         static_cast<std::uint32_t>(dst);
}

constexpr std::uint64_t kSaturated = std::uint64_t{1} << 63;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a >= kSaturated || b >= kSaturated || a > kSaturated / b)
    return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  if (s < a || s >= kSaturated) return kSaturated;
  return s;
}

std::uint64_t sat_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  while (exp--) out = sat_mul(out, base);
  return out;
}

std::string_view part_name(ControlFramework::Part part) {
  switch (part) {
    case ControlFramework::Part::Fixed: return "fixed";
    case ControlFramework::Part::Uncertain: return "uncertain";
    case ControlFramework::Part::Control: return "control";
  }
  return "?";
}

}  // namespace

std::size_t ControlFramework::add_argument(std::string name, Part part) {
  auto it = index_.find(name);
  if (it != index_.end())
    throw PartOverlap("argument '" + name + "' already declared in the " +
                      std::string(part_name(parts_[it->second])) + " part");
  std::size_t id = names_.size();
  index_.emplace(name, id);
  names_.push_back(std::move(name));
  parts_.push_back(part);
  switch (part) {
    case Part::Fixed: fixed_.push_back(id); break;
    case Part::Uncertain: uncertain_.push_back(id); break;
    case Part::Control: control_.push_back(id); break;
  }
  return id;
}

std::size_t ControlFramework::require_known(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    throw UndeclaredArgument("argument '" + std::string(name) +
                             "' is not declared");
  return it->second;
}

void ControlFramework::reserve_pair(std::size_t src, std::size_t dst) {
  if (!attack_keys_.insert(pair_key(src, dst)).second)
    throw DuplicateAttack("attack " + names_[src] + " -> " + names_[dst] +
                          " is already declared in another relation");
}

void ControlFramework::add_fixed_attack(std::string_view src,
                                        std::string_view dst) {
  std::size_t s = require_known(src), d = require_known(dst);
  if (parts_[s] == Part::Control || parts_[d] == Part::Control)
    throw IllegalUncertainControlAttack(
        "fixed attacks may not involve control arguments");
  reserve_pair(s, d);
  fixed_attacks_.emplace_back(s, d);
}

void ControlFramework::add_uncertain_attack(std::string_view src,
                                            std::string_view dst) {
  std::size_t s = require_known(src), d = require_known(dst);
  if (parts_[s] == Part::Control || parts_[d] == Part::Control)
    throw IllegalUncertainControlAttack(
        "uncertain attacks may not involve control arguments");
  reserve_pair(s, d);
  uncertain_attacks_.emplace_back(s, d);
}

bool ControlFramework::add_symmetric_attack(std::string_view src,
                                            std::string_view dst) {
  std::size_t s = require_known(src), d = require_known(dst);
  if (s == d)
    throw ReflexiveSymmetricAttack("symmetric attack on '" + names_[s] +
                                   "' attacks itself");
  if (parts_[s] == Part::Control || parts_[d] == Part::Control)
    throw IllegalUncertainControlAttack(
        "symmetric attacks may not involve control arguments");
  for (const auto& [a, b] : symmetric_attacks_)
    if ((a == s && b == d) || (a == d && b == s)) return false;
  // A symmetric pair reserves both directions.
  reserve_pair(s, d);
  try {
    reserve_pair(d, s);
  } catch (const DuplicateAttack&) {
    attack_keys_.erase(pair_key(s, d));
    throw;
  }
  symmetric_attacks_.emplace_back(s, d);
  return true;
}

void ControlFramework::add_control_attack(std::string_view src,
                                          std::string_view dst) {
  std::size_t s = require_known(src), d = require_known(dst);
  if (parts_[s] != Part::Control && parts_[d] != Part::Control)
    throw IllegalUncertainControlAttack(
        "control attacks need a control endpoint");
  reserve_pair(s, d);
  control_attacks_.emplace_back(s, d);
}

void ControlFramework::add_attack_classified(std::string_view src,
                                             std::string_view dst) {
  std::size_t s = require_known(src), d = require_known(dst);
  if (parts_[s] == Part::Control || parts_[d] == Part::Control)
    add_control_attack(src, dst);
  else
    add_fixed_attack(src, dst);
}

std::optional<std::size_t> ControlFramework::index_of(
    std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool ControlFramework::is_fixed(std::string_view name) const {
  auto idx = index_of(name);
  return idx && parts_[*idx] == Part::Fixed;
}

Configuration make_configuration(const ControlFramework& caf,
                                 const std::vector<std::string>& members) {
  Configuration config;
  config.selected.assign(caf.control_arguments().size(), 0);
  for (const auto& name : members) {
    auto idx = caf.index_of(name);
    bool placed = false;
    if (idx && caf.part(*idx) == ControlFramework::Part::Control) {
      const auto& control = caf.control_arguments();
      for (std::size_t i = 0; i < control.size(); ++i) {
        if (control[i] == *idx) {
          config.selected[i] = 1;
          placed = true;
          break;
        }
      }
    }
    if (!placed)
      throw UndeclaredArgument("'" + name + "' is not a control argument");
  }
  return config;
}

std::vector<std::string> configuration_names(const ControlFramework& caf,
                                             const Configuration& config) {
  const auto& control = caf.control_arguments();
  if (config.selected.size() != control.size())
    throw ForeignConfiguration(
        "configuration does not belong to this framework");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < control.size(); ++i)
    if (config.selected[i]) out.push_back(caf.argument_name(control[i]));
  return out;
}

std::optional<TargetMode> target_mode_from_string(std::string_view name) {
  if (name == "credulous-accept") return TargetMode::CredulousAccept;
  if (name == "skeptical-accept") return TargetMode::SkepticalAccept;
  if (name == "credulous-reject") return TargetMode::CredulousReject;
  if (name == "skeptical-reject") return TargetMode::SkepticalReject;
  return std::nullopt;
}

std::string_view to_string(TargetMode mode) {
  switch (mode) {
    case TargetMode::CredulousAccept: return "credulous-accept";
    case TargetMode::SkepticalAccept: return "skeptical-accept";
    case TargetMode::CredulousReject: return "credulous-reject";
    case TargetMode::SkepticalReject: return "skeptical-reject";
  }
  return "?";
}

namespace {

// Presence of an endpoint under a given uncertain-argument subset: fixed
// arguments are always there, uncertain ones iff selected, control ones are
// handled separately by the configuration.
bool endpoint_present(const ControlFramework& caf,
                      const std::vector<std::uint8_t>& uncertain_present,
                      std::size_t global_idx) {
  if (caf.part(global_idx) != ControlFramework::Part::Uncertain) return true;
  const auto& uncertain = caf.uncertain_arguments();
  for (std::size_t i = 0; i < uncertain.size(); ++i)
    if (uncertain[i] == global_idx) return uncertain_present[i] != 0;
  return false;
}

void validate_completion(const ControlFramework& caf, const Completion& c) {
  const char* foreign = "completion does not belong to this framework";
  if (c.uncertain_present.size() != caf.uncertain_arguments().size() ||
      c.uncertain_attack_on.size() != caf.uncertain_attacks().size() ||
      c.symmetric_dir.size() != caf.symmetric_attacks().size())
    throw ForeignCompletion(foreign);
  for (std::size_t i = 0; i < caf.uncertain_attacks().size(); ++i) {
    const auto& [s, d] = caf.uncertain_attacks()[i];
    bool relevant = endpoint_present(caf, c.uncertain_present, s) &&
                    endpoint_present(caf, c.uncertain_present, d);
    if (!relevant && c.uncertain_attack_on[i]) throw ForeignCompletion(foreign);
  }
  for (std::size_t i = 0; i < caf.symmetric_attacks().size(); ++i) {
    const auto& [s, d] = caf.symmetric_attacks()[i];
    bool relevant = endpoint_present(caf, c.uncertain_present, s) &&
                    endpoint_present(caf, c.uncertain_present, d);
    if (relevant != (c.symmetric_dir[i] != Completion::SymDir::Irrelevant))
      throw ForeignCompletion(foreign);
  }
}

}  // namespace

std::uint64_t count_completions(const ControlFramework& caf) {
  std::size_t nu = caf.uncertain_arguments().size();
  if (nu >= 40) return kSaturated;  // count >= 2^nu
  std::uint64_t total = 0;
  std::vector<std::uint8_t> present(nu, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nu); ++mask) {
    for (std::size_t j = 0; j < nu; ++j)
      present[j] = (mask >> (nu - 1 - j)) & 1u;
    std::size_t relevant_attacks = 0, relevant_pairs = 0;
    for (const auto& [s, d] : caf.uncertain_attacks())
      if (endpoint_present(caf, present, s) &&
          endpoint_present(caf, present, d))
        ++relevant_attacks;
    for (const auto& [s, d] : caf.symmetric_attacks())
      if (endpoint_present(caf, present, s) &&
          endpoint_present(caf, present, d))
        ++relevant_pairs;
    total = sat_add(total, sat_mul(sat_pow(2, relevant_attacks),
                                   sat_pow(3, relevant_pairs)));
    if (total >= kSaturated) return kSaturated;
  }
  return total;
}

std::uint64_t count_configurations(const ControlFramework& caf) {
  return sat_pow(2, caf.control_arguments().size());
}

bool for_each_completion(const ControlFramework& caf,
                         const std::function<bool(const Completion&)>& fn) {
  std::size_t nu = caf.uncertain_arguments().size();
  Completion c;
  c.uncertain_present.assign(nu, 0);
  c.uncertain_attack_on.assign(caf.uncertain_attacks().size(), 0);
  c.symmetric_dir.assign(caf.symmetric_attacks().size(),
                         Completion::SymDir::Irrelevant);

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nu); ++mask) {
    for (std::size_t j = 0; j < nu; ++j)
      c.uncertain_present[j] = (mask >> (nu - 1 - j)) & 1u;

    std::vector<std::size_t> live_attacks, live_pairs;
    for (std::size_t i = 0; i < caf.uncertain_attacks().size(); ++i) {
      const auto& [s, d] = caf.uncertain_attacks()[i];
      c.uncertain_attack_on[i] = 0;
      if (endpoint_present(caf, c.uncertain_present, s) &&
          endpoint_present(caf, c.uncertain_present, d))
        live_attacks.push_back(i);
    }
    for (std::size_t i = 0; i < caf.symmetric_attacks().size(); ++i) {
      const auto& [s, d] = caf.symmetric_attacks()[i];
      c.symmetric_dir[i] = Completion::SymDir::Irrelevant;
      if (endpoint_present(caf, c.uncertain_present, s) &&
          endpoint_present(caf, c.uncertain_present, d))
        live_pairs.push_back(i);
    }

    std::uint64_t attack_states = std::uint64_t{1} << live_attacks.size();
    std::uint64_t pair_states = sat_pow(3, live_pairs.size());
    for (std::uint64_t am = 0; am < attack_states; ++am) {
      for (std::size_t j = 0; j < live_attacks.size(); ++j)
        c.uncertain_attack_on[live_attacks[j]] =
            (am >> (live_attacks.size() - 1 - j)) & 1u;
      for (std::uint64_t pm = 0; pm < pair_states; ++pm) {
        std::uint64_t rest = pm;
        for (std::size_t j = live_pairs.size(); j-- > 0;) {
          c.symmetric_dir[live_pairs[j]] =
              static_cast<Completion::SymDir>(rest % 3);
          rest /= 3;
        }
        if (!fn(c)) return false;
      }
    }
  }
  return true;
}

std::vector<Completion> enumerate_completions(
    const ControlFramework& caf, std::uint64_t completion_budget) {
  std::uint64_t total = count_completions(caf);
  if (total > completion_budget)
    throw CompletionBudgetExceeded(
        "completion count " +
        (total >= kSaturated ? std::string("(overflow)")
                             : std::to_string(total)) +
        " exceeds the budget of " + std::to_string(completion_budget));
  std::vector<Completion> out;
  out.reserve(static_cast<std::size_t>(total));
  for_each_completion(caf, [&](const Completion& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

ArgumentationFramework induced_framework(const ControlFramework& caf,
                                         const Completion& completion,
                                         const Configuration& config) {
  validate_completion(caf, completion);
  if (config.selected.size() != caf.control_arguments().size())
    throw ForeignConfiguration(
        "configuration does not belong to this framework");

  ArgumentationFramework af;
  std::vector<bool> present(caf.argument_count(), false);
  auto admit = [&](std::size_t global_idx) {
    present[global_idx] = true;
    af.add_argument(caf.argument_name(global_idx));
  };
  for (std::size_t i : caf.fixed_arguments()) admit(i);
  const auto& uncertain = caf.uncertain_arguments();
  for (std::size_t i = 0; i < uncertain.size(); ++i)
    if (completion.uncertain_present[i]) admit(uncertain[i]);
  const auto& control = caf.control_arguments();
  for (std::size_t i = 0; i < control.size(); ++i)
    if (config.selected[i]) admit(control[i]);

  auto add_if_present = [&](std::size_t s, std::size_t d) {
    if (present[s] && present[d])
      af.add_attack(caf.argument_name(s), caf.argument_name(d));
  };
  for (const auto& [s, d] : caf.fixed_attacks()) add_if_present(s, d);
  const auto& uatts = caf.uncertain_attacks();
  for (std::size_t i = 0; i < uatts.size(); ++i)
    if (completion.uncertain_attack_on[i])
      add_if_present(uatts[i].first, uatts[i].second);
  const auto& pairs = caf.symmetric_attacks();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    switch (completion.symmetric_dir[i]) {
      case Completion::SymDir::Forward:
        add_if_present(pairs[i].first, pairs[i].second);
        break;
      case Completion::SymDir::Backward:
        add_if_present(pairs[i].second, pairs[i].first);
        break;
      case Completion::SymDir::Both:
        add_if_present(pairs[i].first, pairs[i].second);
        add_if_present(pairs[i].second, pairs[i].first);
        break;
      case Completion::SymDir::Irrelevant:
        break;
    }
  }
  for (const auto& [s, d] : caf.control_attacks()) add_if_present(s, d);
  return af;
}

namespace {

void validate_target(const ControlFramework& caf, const TargetQuery& query) {
  if (!caf.is_fixed(query.target))
    throw UnknownArgument("target '" + query.target +
                          "' is not a fixed argument");
}

bool query_holds(const ArgumentationFramework& af, const TargetQuery& query) {
  AcceptanceMode mode;
  bool negate;
  switch (query.mode) {
    case TargetMode::CredulousAccept:
      mode = AcceptanceMode::Credulous; negate = false; break;
    case TargetMode::SkepticalAccept:
      mode = AcceptanceMode::Skeptical; negate = false; break;
    case TargetMode::CredulousReject:
      mode = AcceptanceMode::Credulous; negate = true; break;
    default:
      mode = AcceptanceMode::Skeptical; negate = true; break;
  }
  bool accepted = is_accepted(af, query.target, query.semantics, mode);
  return negate ? !accepted : accepted;
}

void check_completion_budget(const ControlFramework& caf,
                             const Budgets& budgets) {
  std::uint64_t total = count_completions(caf);
  if (total > budgets.completions)
    throw CompletionBudgetExceeded(
        "completion count " +
        (total >= kSaturated ? std::string("(overflow)")
                             : std::to_string(total)) +
        " exceeds the budget of " + std::to_string(budgets.completions));
}

bool check_configuration_unbudgeted(const ControlFramework& caf,
                                    const Configuration& config,
                                    const TargetQuery& query) {
  bool all_hold = for_each_completion(caf, [&](const Completion& c) {
    return query_holds(induced_framework(caf, c, config), query);
  });
  return all_hold;
}

}  // namespace

bool check_configuration(const ControlFramework& caf,
                         const Configuration& config, const TargetQuery& query,
                         const Budgets& budgets) {
  if (config.selected.size() != caf.control_arguments().size())
    throw ForeignConfiguration(
        "configuration does not belong to this framework");
  validate_target(caf, query);
  check_completion_budget(caf, budgets);
  return check_configuration_unbudgeted(caf, config, query);
}

std::optional<Configuration> find_controlling_configuration(
    const ControlFramework& caf, const TargetQuery& query,
    const Budgets& budgets) {
  validate_target(caf, query);
  std::uint64_t config_count = count_configurations(caf);
  if (config_count > budgets.configurations)
    throw ConfigurationBudgetExceeded(
        "configuration count " +
        (config_count >= kSaturated ? std::string("(overflow)")
                                    : std::to_string(config_count)) +
        " exceeds the budget of " + std::to_string(budgets.configurations));
  check_completion_budget(caf, budgets);

  std::size_t nc = caf.control_arguments().size();
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(config_count));
  for (std::uint64_t m = 0; m < config_count; ++m) masks[m] = m;
  // Smallest configurations first, ties broken lexicographically on the
  // ascending control-argument indices.
  auto mask_members = [nc](std::uint64_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nc; ++i)
      if ((mask >> i) & 1u) out.push_back(i);
    return out;
  };
  std::sort(masks.begin(), masks.end(),
            [&](std::uint64_t a, std::uint64_t b) {
              int ca = std::popcount(a), cb = std::popcount(b);
              if (ca != cb) return ca < cb;
              auto ma = mask_members(a), mb = mask_members(b);
              return std::lexicographical_compare(ma.begin(), ma.end(),
                                                  mb.begin(), mb.end());
            });

  Configuration config;
  config.selected.assign(nc, 0);
  for (std::uint64_t mask : masks) {
    for (std::size_t i = 0; i < nc; ++i)
      config.selected[i] = (mask >> i) & 1u;
    if (check_configuration_unbudgeted(caf, config, query)) return config;
  }
  return std::nullopt;
}

}  // namespace cafcoal
