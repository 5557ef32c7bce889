#pragma once

// Brute-force reference implementations used to cross-check the library.
// Everything here works straight from the definitions by looping over all
// subsets (arguments are identified with bit positions of a mask), so it
// shares no search strategy with the production code: the only library
// entry points used are the framework accessors.

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cafcoal/af.hpp"
#include "cafcoal/caf.hpp"
#include "cafcoal/catl.hpp"
#include "cafcoal/formats.hpp"

namespace oracle {

using cafcoal::ArgumentationFramework;
using cafcoal::Semantics;

using Mask = std::uint32_t;

inline bool mask_has(Mask mask, std::size_t i) { return (mask >> i) & 1u; }

inline bool conflict_free(const ArgumentationFramework& af, Mask mask) {
  std::size_t n = af.argument_count();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (mask_has(mask, a) && mask_has(mask, b) && af.has_attack(a, b))
        return false;
  return true;
}

// Every attacker of `arg` is attacked by some member of `mask`.
inline bool defends(const ArgumentationFramework& af, Mask mask,
                    std::size_t arg) {
  std::size_t n = af.argument_count();
  for (std::size_t b = 0; b < n; ++b) {
    if (!af.has_attack(b, arg)) continue;
    bool countered = false;
    for (std::size_t c = 0; c < n; ++c)
      if (mask_has(mask, c) && af.has_attack(c, b)) countered = true;
    if (!countered) return false;
  }
  return true;
}

inline bool admissible(const ArgumentationFramework& af, Mask mask) {
  if (!conflict_free(af, mask)) return false;
  std::size_t n = af.argument_count();
  for (std::size_t a = 0; a < n; ++a)
    if (mask_has(mask, a) && !defends(af, mask, a)) return false;
  return true;
}

inline bool complete(const ArgumentationFramework& af, Mask mask) {
  if (!admissible(af, mask)) return false;
  std::size_t n = af.argument_count();
  for (std::size_t a = 0; a < n; ++a)
    if (defends(af, mask, a) && !mask_has(mask, a)) return false;
  return true;
}

inline bool stable(const ArgumentationFramework& af, Mask mask) {
  if (!conflict_free(af, mask)) return false;
  std::size_t n = af.argument_count();
  for (std::size_t a = 0; a < n; ++a) {
    if (mask_has(mask, a)) continue;
    bool attacked = false;
    for (std::size_t b = 0; b < n; ++b)
      if (mask_has(mask, b) && af.has_attack(b, a)) attacked = true;
    if (!attacked) return false;
  }
  return true;
}

// All extensions of the given semantics as masks. Preferred is computed as
// the maximal admissible sets and grounded as the least complete set, which
// are the definitional characterizations rather than the routes the library
// takes.
inline std::vector<Mask> extensions(const ArgumentationFramework& af,
                                    Semantics semantics) {
  std::size_t n = af.argument_count();
  Mask limit = Mask{1} << n;
  std::vector<Mask> out;
  switch (semantics) {
    case Semantics::Admissible:
      for (Mask m = 0; m < limit; ++m)
        if (admissible(af, m)) out.push_back(m);
      break;
    case Semantics::Complete:
      for (Mask m = 0; m < limit; ++m)
        if (complete(af, m)) out.push_back(m);
      break;
    case Semantics::Stable:
      for (Mask m = 0; m < limit; ++m)
        if (stable(af, m)) out.push_back(m);
      break;
    case Semantics::Preferred: {
      std::vector<Mask> adm;
      for (Mask m = 0; m < limit; ++m)
        if (admissible(af, m)) adm.push_back(m);
      for (Mask m : adm) {
        bool maximal = true;
        for (Mask other : adm)
          if (other != m && (m & other) == m) maximal = false;
        if (maximal) out.push_back(m);
      }
      break;
    }
    case Semantics::Grounded: {
      std::vector<Mask> comp;
      for (Mask m = 0; m < limit; ++m)
        if (complete(af, m)) comp.push_back(m);
      for (Mask m : comp) {
        bool least = true;
        for (Mask other : comp)
          if ((m & other) != m) least = false;
        if (least) {
          out.push_back(m);
          break;
        }
      }
      break;
    }
  }
  return out;
}

inline bool accepted(const ArgumentationFramework& af, std::size_t arg,
                     Semantics semantics, bool credulous) {
  auto exts = extensions(af, semantics);
  if (credulous) {
    for (Mask m : exts)
      if (mask_has(m, arg)) return true;
    return false;
  }
  for (Mask m : exts)
    if (!mask_has(m, arg)) return false;
  return true;  // vacuously over an empty extension list
}

// Canonical order used by the library: cardinality, then lexicographic on
// the ascending index sequence. Recomputed here from scratch.
inline std::vector<std::vector<std::size_t>> sorted_members(
    const std::vector<Mask>& masks, std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (Mask m : masks) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (mask_has(m, i)) members.push_back(i);
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Random generators. All take the engine by reference so test corpora are
// reproducible from a fixed seed.

inline ArgumentationFramework random_af(std::mt19937& rng, std::size_t max_n) {
  std::uniform_int_distribution<std::size_t> size(1, max_n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t n = size(rng);
  double p = 0.05 + 0.55 * unit(rng);
  ArgumentationFramework af;
  for (std::size_t i = 0; i < n; ++i)
    af.add_argument(std::string(1, static_cast<char>('a' + i)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (unit(rng) < p) af.add_attack(i, j);
  return af;
}

// Framework with the attack matrix given by the bits of `matrix`,
// row-major: bit i*n+j set means argument i attacks argument j.
inline ArgumentationFramework af_from_matrix(std::size_t n,
                                             std::uint32_t matrix) {
  ArgumentationFramework af;
  for (std::size_t i = 0; i < n; ++i)
    af.add_argument(std::string(1, static_cast<char>('a' + i)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((matrix >> (i * n + j)) & 1u) af.add_attack(i, j);
  return af;
}

// ---------------------------------------------------------------------------
// Control-framework oracle: materializes every raw uncertainty resolution
// (2^|uncertain args| * 2^|uncertain attacks| * 3^|symmetric pairs|, with no
// relevance filtering) as a plain framework and deduplicates the results,
// so it is independent of the library's completion enumeration.

struct CafScenarios {
  // One entry per distinct induced fixed-plus-uncertain world; control
  // arguments and attacks are added separately per configuration.
  std::vector<ArgumentationFramework> worlds;
};

inline ArgumentationFramework build_scenario(
    const cafcoal::ControlFramework& caf, std::uint32_t arg_mask,
    std::uint32_t att_mask, const std::vector<int>& sym_dirs,
    std::uint32_t config_mask) {
  const auto& uncertain = caf.uncertain_arguments();
  const auto& control = caf.control_arguments();

  std::set<std::size_t> present;
  for (std::size_t g : caf.fixed_arguments()) present.insert(g);
  for (std::size_t i = 0; i < uncertain.size(); ++i)
    if (mask_has(arg_mask, i)) present.insert(uncertain[i]);
  for (std::size_t i = 0; i < control.size(); ++i)
    if (mask_has(config_mask, i)) present.insert(control[i]);

  ArgumentationFramework af;
  // Insertion order fixed -> uncertain -> control, matching the order the
  // library documents for induced frameworks.
  for (std::size_t g : caf.fixed_arguments()) af.add_argument(caf.argument_name(g));
  for (std::size_t i = 0; i < uncertain.size(); ++i)
    if (mask_has(arg_mask, i)) af.add_argument(caf.argument_name(uncertain[i]));
  for (std::size_t i = 0; i < control.size(); ++i)
    if (mask_has(config_mask, i))
      af.add_argument(caf.argument_name(control[i]));

  auto add_if_present = [&](std::size_t s, std::size_t d) {
    if (present.count(s) && present.count(d))
      af.add_attack(caf.argument_name(s), caf.argument_name(d));
  };
  for (const auto& [s, d] : caf.fixed_attacks()) add_if_present(s, d);
  for (std::size_t i = 0; i < caf.uncertain_attacks().size(); ++i)
    if (mask_has(att_mask, i))
      add_if_present(caf.uncertain_attacks()[i].first,
                     caf.uncertain_attacks()[i].second);
  for (std::size_t i = 0; i < caf.symmetric_attacks().size(); ++i) {
    auto [s, d] = caf.symmetric_attacks()[i];
    if (sym_dirs[i] == 0 || sym_dirs[i] == 2) add_if_present(s, d);
    if (sym_dirs[i] == 1 || sym_dirs[i] == 2) add_if_present(d, s);
  }
  for (const auto& [s, d] : caf.control_attacks()) add_if_present(s, d);
  return af;
}

// All distinct induced frameworks for one configuration.
inline std::vector<ArgumentationFramework> scenarios_for_config(
    const cafcoal::ControlFramework& caf, std::uint32_t config_mask) {
  std::size_t nu = caf.uncertain_arguments().size();
  std::size_t na = caf.uncertain_attacks().size();
  std::size_t ns = caf.symmetric_attacks().size();
  std::size_t dirs = 1;
  for (std::size_t i = 0; i < ns; ++i) dirs *= 3;

  std::set<std::string> seen;
  std::vector<ArgumentationFramework> out;
  for (std::uint32_t am = 0; am < (1u << nu); ++am) {
    for (std::uint32_t tm = 0; tm < (1u << na); ++tm) {
      for (std::size_t code = 0; code < dirs; ++code) {
        std::vector<int> sym(ns);
        std::size_t rest = code;
        for (std::size_t i = 0; i < ns; ++i) {
          sym[i] = static_cast<int>(rest % 3);
          rest /= 3;
        }
        ArgumentationFramework af =
            build_scenario(caf, am, tm, sym, config_mask);
        std::string key = cafcoal::serialize_apx(af);
        if (seen.insert(key).second) out.push_back(std::move(af));
      }
    }
  }
  return out;
}

inline bool oracle_query_holds(const ArgumentationFramework& af,
                               const cafcoal::TargetQuery& query) {
  auto idx = af.index_of(query.target);
  if (!idx) return false;  // target missing cannot happen for fixed targets
  bool credulous = query.mode == cafcoal::TargetMode::CredulousAccept ||
                   query.mode == cafcoal::TargetMode::CredulousReject;
  bool verdict = accepted(af, *idx, query.semantics, credulous);
  if (query.mode == cafcoal::TargetMode::CredulousReject ||
      query.mode == cafcoal::TargetMode::SkepticalReject)
    return !verdict;
  return verdict;
}

inline bool oracle_config_controls(const cafcoal::ControlFramework& caf,
                                   std::uint32_t config_mask,
                                   const cafcoal::TargetQuery& query) {
  for (const auto& af : scenarios_for_config(caf, config_mask))
    if (!oracle_query_holds(af, query)) return false;
  return true;
}

// Independent exists-forall loop: first configuration mask in (cardinality,
// then lexicographic on ascending selected indices) order that controls the
// query, or nullopt.
inline std::optional<std::uint32_t> oracle_controlling_config(
    const cafcoal::ControlFramework& caf, const cafcoal::TargetQuery& query) {
  std::size_t nc = caf.control_arguments().size();
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1u << nc); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(),
            [nc](std::uint32_t a, std::uint32_t b) {
              int ca = 0, cb = 0;
              for (std::size_t i = 0; i < nc; ++i) {
                ca += (a >> i) & 1u;
                cb += (b >> i) & 1u;
              }
              if (ca != cb) return ca < cb;
              std::vector<int> la, lb;
              for (std::size_t i = 0; i < nc; ++i) {
                if ((a >> i) & 1u) la.push_back(static_cast<int>(i));
                if ((b >> i) & 1u) lb.push_back(static_cast<int>(i));
              }
              return la < lb;
            });
  for (std::uint32_t m : masks)
    if (oracle_config_controls(caf, m, query)) return m;
  return std::nullopt;
}

// Size caps for random control frameworks; the defaults are the desk-scale
// bounds used by the controllability cross-check.
struct CafBounds {
  std::size_t max_fixed = 4;
  std::size_t max_uncertain = 3;
  std::size_t max_control = 3;
  std::size_t max_uncertain_attacks = 3;
  std::size_t max_symmetric_attacks = 2;
};

// Random control framework: 1..max_fixed fixed, 0..max_uncertain uncertain,
// 0..max_control control arguments.
inline cafcoal::ControlFramework random_caf(std::mt19937& rng,
                                            CafBounds bounds = {}) {
  using cafcoal::ControlFramework;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::size_t nf = pick(1, bounds.max_fixed);
  std::size_t nu = pick(0, bounds.max_uncertain);
  std::size_t nc = pick(0, bounds.max_control);

  ControlFramework caf;
  std::vector<std::string> plain;  // fixed + uncertain names
  std::vector<std::string> control;
  for (std::size_t i = 0; i < nf; ++i) {
    std::string name = "f" + std::to_string(i);
    caf.add_argument(name, ControlFramework::Part::Fixed);
    plain.push_back(name);
  }
  for (std::size_t i = 0; i < nu; ++i) {
    std::string name = "u" + std::to_string(i);
    caf.add_argument(name, ControlFramework::Part::Uncertain);
    plain.push_back(name);
  }
  for (std::size_t i = 0; i < nc; ++i) {
    std::string name = "c" + std::to_string(i);
    caf.add_argument(name, ControlFramework::Part::Control);
    control.push_back(name);
  }

  // Directed pairs over the plain arguments, split between the fixed and
  // uncertain relations; unordered pairs feed the symmetric relation. Each
  // directed pair is used at most once so the relations stay disjoint.
  std::set<std::pair<std::string, std::string>> used;
  auto try_add = [&](auto&& add, const std::string& s, const std::string& d,
                     bool symmetric) {
    if (used.count({s, d}) || (symmetric && used.count({d, s}))) return;
    add(s, d);
    used.insert({s, d});
    if (symmetric) used.insert({d, s});
  };
  std::size_t fixed_attacks = pick(0, 2 * nf);
  for (std::size_t i = 0; i < fixed_attacks; ++i) {
    const auto& s = plain[pick(0, plain.size() - 1)];
    const auto& d = plain[pick(0, plain.size() - 1)];
    try_add([&](auto a, auto b) { caf.add_fixed_attack(a, b); }, s, d, false);
  }
  std::size_t uncertain_attacks = pick(0, bounds.max_uncertain_attacks);
  for (std::size_t i = 0; i < uncertain_attacks; ++i) {
    const auto& s = plain[pick(0, plain.size() - 1)];
    const auto& d = plain[pick(0, plain.size() - 1)];
    try_add([&](auto a, auto b) { caf.add_uncertain_attack(a, b); }, s, d,
            false);
  }
  std::size_t symmetric_attacks = pick(0, bounds.max_symmetric_attacks);
  for (std::size_t i = 0; i < symmetric_attacks; ++i) {
    const auto& s = plain[pick(0, plain.size() - 1)];
    const auto& d = plain[pick(0, plain.size() - 1)];
    if (s == d) continue;
    try_add([&](auto a, auto b) { caf.add_symmetric_attack(a, b); }, s, d,
            true);
  }
  if (!control.empty()) {
    std::size_t control_attacks = pick(0, 2 * nc);
    for (std::size_t i = 0; i < control_attacks; ++i) {
      const auto& s = control[pick(0, control.size() - 1)];
      const auto& d = plain[pick(0, plain.size() - 1)];
      if (unit(rng) < 0.5)
        try_add([&](auto a, auto b) { caf.add_control_attack(a, b); }, s, d,
                false);
      else
        try_add([&](auto a, auto b) { caf.add_control_attack(a, b); }, d, s,
                false);
    }
  }
  return caf;
}

// ---------------------------------------------------------------------------
// Random one-step game systems (<= 4 states, <= 3 agents, <= 3 moves) with
// one or two small control frameworks, for the coalition-law checks.

inline cafcoal::CafAtsSystem random_system(std::mt19937& rng) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  cafcoal::CafAtsSystem::Data data;
  std::size_t n_states = pick(1, 4);
  data.agent_count = static_cast<std::uint32_t>(pick(1, 3));
  for (std::size_t q = 0; q < n_states; ++q)
    data.states.push_back("s" + std::to_string(q));
  data.init_state = pick(0, n_states - 1);
  data.propositions = {"p", "q"};
  data.labels.resize(n_states);
  for (std::size_t q = 0; q < n_states; ++q)
    for (std::uint32_t pr = 0; pr < 2; ++pr)
      if (unit(rng) < 0.5) data.labels[q].push_back(pr);

  data.move_counts.assign(n_states,
                          std::vector<std::uint32_t>(data.agent_count, 1));
  for (std::size_t q = 0; q < n_states; ++q)
    for (std::uint32_t i = 0; i < data.agent_count; ++i)
      data.move_counts[q][i] = static_cast<std::uint32_t>(pick(1, 3));

  for (std::size_t q = 0; q < n_states; ++q) {
    cafcoal::JointAction action(data.agent_count, 1);
    for (;;) {
      data.transitions[{static_cast<std::uint32_t>(q), action}] =
          static_cast<std::uint32_t>(pick(0, n_states - 1));
      std::size_t i = data.agent_count;
      while (i-- > 0) {
        if (action[i] < data.move_counts[q][i]) {
          ++action[i];
          break;
        }
        action[i] = 1;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }

  // Small frameworks keep the zeta evaluations cheap.
  CafBounds small{3, 2, 2, 2, 1};
  std::size_t n_cafs = pick(1, 2);
  for (std::size_t k = 0; k < n_cafs; ++k)
    data.cafs.push_back(random_caf(rng, small));
  data.caf_paths.assign(n_cafs, "");
  for (std::size_t q = 0; q < n_states; ++q)
    data.state_caf.push_back(static_cast<std::uint32_t>(pick(0, n_cafs - 1)));

  // Sparse update map; unlisted pairs fall back to identity.
  for (std::uint32_t k = 0; k < n_cafs; ++k) {
    cafcoal::JointAction shape(data.agent_count, 1);
    if (unit(rng) < 0.7)
      data.upsilon[{k, shape}] = static_cast<std::uint32_t>(pick(0, n_cafs - 1));
  }
  return cafcoal::CafAtsSystem::create(std::move(data));
}

// Random formula over props p/q and zeta(f0); f0 is fixed in every
// generated framework. Depth-bounded; all connectives can appear.
inline cafcoal::Formula random_formula(std::mt19937& rng,
                                       std::uint32_t agent_count,
                                       int depth = 3) {
  using cafcoal::Formula;
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  if (depth == 0 || pick(0, 3) == 0) {
    switch (pick(0, 2)) {
      case 0: return Formula::prop("p");
      case 1: return Formula::prop("q");
      default: return Formula::zeta("f0");
    }
  }
  switch (pick(0, 3)) {
    case 0:
      return Formula::negation(random_formula(rng, agent_count, depth - 1));
    case 1:
      return Formula::conjunction(random_formula(rng, agent_count, depth - 1),
                                  random_formula(rng, agent_count, depth - 1));
    case 2:
      return Formula::implication(random_formula(rng, agent_count, depth - 1),
                                  random_formula(rng, agent_count, depth - 1));
    default: {
      std::vector<std::uint32_t> agents;
      for (std::uint32_t i = 1; i <= agent_count; ++i)
        if (pick(0, 1)) agents.push_back(i);
      return Formula::coalition(std::move(agents),
                                random_formula(rng, agent_count, depth - 1));
    }
  }
}

}  // namespace oracle
