#include "cafcoal/catl.hpp"

#include <algorithm>
#include <unordered_map>

namespace cafcoal {

struct Formula::Node {
  Kind kind;
  std::string token;                   // Prop / Zeta
  std::vector<std::uint32_t> agents;   // Coalition, sorted unique
  std::shared_ptr<const Node> lhs, rhs;
};

struct FormulaAccess {
  static const Formula::Node* get(const Formula& f) { return f.node_.get(); }
  static Formula wrap(std::shared_ptr<const Formula::Node> n) {
    return Formula(std::move(n));
  }
};

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::prop(std::string token) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prop;
  n->token = std::move(token);
  return Formula(std::move(n));
}

Formula Formula::zeta(std::string argument) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Zeta;
  n->token = std::move(argument);
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->lhs = std::move(f.node_);
  return Formula(std::move(n));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->lhs = std::move(lhs.node_);
  n->rhs = std::move(rhs.node_);
  return Formula(std::move(n));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Implies;
  n->lhs = std::move(lhs.node_);
  n->rhs = std::move(rhs.node_);
  return Formula(std::move(n));
}

Formula Formula::coalition(std::vector<std::uint32_t> agents, Formula body) {
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Coalition;
  n->agents = std::move(agents);
  n->lhs = std::move(body.node_);
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::token() const { return node_->token; }
const std::vector<std::uint32_t>& Formula::agents() const {
  return node_->agents;
}
Formula Formula::child() const { return Formula(node_->lhs); }
Formula Formula::lhs() const { return Formula(node_->lhs); }
Formula Formula::rhs() const { return Formula(node_->rhs); }

bool Formula::operator==(const Formula& other) const {
  const Node* a = node_.get();
  const Node* b = other.node_.get();
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Prop:
    case Kind::Zeta:
      return a->token == b->token;
    case Kind::Not:
      return Formula(a->lhs) == Formula(b->lhs);
    case Kind::Coalition:
      return a->agents == b->agents && Formula(a->lhs) == Formula(b->lhs);
    case Kind::And:
    case Kind::Implies:
      return Formula(a->lhs) == Formula(b->lhs) &&
             Formula(a->rhs) == Formula(b->rhs);
  }
  return false;
}

CafAtsSystem CafAtsSystem::create(Data data) {
  if (data.agent_count == 0) throw Error("a system needs at least one agent");
  if (data.states.empty()) throw Error("a system needs at least one state");
  std::size_t n_states = data.states.size();
  if (data.init_state >= n_states) throw UnknownState("init state out of range");
  if (data.labels.size() != n_states || data.move_counts.size() != n_states)
    throw Error("per-state tables do not match the state count");
  if (data.cafs.empty())
    throw Error("the framework family needs an entry at index 0");
  if (data.caf_paths.size() != data.cafs.size())
    data.caf_paths.resize(data.cafs.size());
  if (data.state_caf.empty()) data.state_caf.assign(n_states, 0);
  if (data.state_caf.size() != n_states)
    throw Error("state->framework binding does not match the state count");

  for (std::size_t q = 0; q < n_states; ++q) {
    if (data.move_counts[q].size() != data.agent_count)
      throw Error("move counts for state '" + data.states[q] +
                  "' do not cover every agent");
    for (std::uint32_t k : data.move_counts[q])
      if (k == 0)
        throw Error("state '" + data.states[q] +
                    "' has an agent with zero moves");
    for (std::uint32_t p : data.labels[q])
      if (p >= data.propositions.size())
        throw UnknownProposition("label index out of range");
    if (data.state_caf[q] >= data.cafs.size())
      throw Error("state '" + data.states[q] +
                  "' is bound to an unknown framework index");
  }
  for (const auto& [key, next] : data.transitions) {
    if (key.first >= n_states || next >= n_states)
      throw UnknownState("transition references an unknown state");
    if (key.second.size() != data.agent_count)
      throw IllegalMove("transition action arity mismatch");
    for (std::uint32_t i = 0; i < data.agent_count; ++i) {
      std::uint32_t m = key.second[i];
      if (m == 0 || m > data.move_counts[key.first][i])
        throw IllegalMove("transition action move out of range");
    }
  }
  for (const auto& [key, next] : data.upsilon) {
    if (key.first >= data.cafs.size() || next >= data.cafs.size())
      throw Error("framework update references an unknown framework index");
    if (key.second.size() != data.agent_count)
      throw IllegalMove("framework update action arity mismatch");
  }

  // Totality: every legal joint action at every state must have a successor.
  for (std::size_t q = 0; q < n_states; ++q) {
    JointAction action(data.agent_count, 1);
    for (;;) {
      if (!data.transitions.count({static_cast<std::uint32_t>(q), action}))
        throw MissingTransition("state '" + data.states[q] +
                                "' is missing a transition");
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

  CafAtsSystem sys;
  sys.data_ = std::move(data);
  return sys;
}

std::optional<std::size_t> CafAtsSystem::state_index(
    std::string_view name) const {
  for (std::size_t i = 0; i < data_.states.size(); ++i)
    if (data_.states[i] == name) return i;
  return std::nullopt;
}

std::size_t CafAtsSystem::require_state(std::string_view name) const {
  auto idx = state_index(name);
  if (!idx)
    throw UnknownState("state '" + std::string(name) + "' is not declared");
  return *idx;
}

bool CafAtsSystem::has_label(std::size_t state, std::size_t prop) const {
  for (std::uint32_t p : data_.labels[state])
    if (p == prop) return true;
  return false;
}

std::uint32_t CafAtsSystem::move_count(std::size_t state,
                                       std::uint32_t agent) const {
  if (agent == 0 || agent > data_.agent_count)
    throw UnknownAgent("agent " + std::to_string(agent) + " does not exist");
  return data_.move_counts[state][agent - 1];
}

void CafAtsSystem::set_zeta_policy(ZetaPolicy policy) {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  data_.zeta_policy = policy;
  cache_->entries.clear();
}

void CafAtsSystem::set_budgets(Budgets budgets) {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  budgets_ = budgets;
  cache_->entries.clear();
}

bool CafAtsSystem::zeta_controlled(std::uint32_t caf_index,
                                   std::size_t fixed_pos) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->entries.find({caf_index, fixed_pos});
    if (it != cache_->entries.end()) return it->second;
  }
  const ControlFramework& caf = data_.cafs[caf_index];
  TargetQuery query;
  query.target =
      caf.argument_name(caf.fixed_arguments()[fixed_pos]);
  query.semantics = data_.zeta_policy.semantics;
  query.mode = data_.zeta_policy.mode;
  bool verdict =
      find_controlling_configuration(caf, query, budgets_).has_value();
  std::lock_guard<std::mutex> lock(cache_->mutex);
  cache_->entries.emplace(std::make_pair(caf_index, fixed_pos), verdict);
  return verdict;
}

std::vector<JointAction> legal_joint_actions(const CafAtsSystem& sys,
                                             std::size_t state) {
  if (state >= sys.states().size())
    throw UnknownState("state index out of range");
  std::uint32_t n = sys.agent_count();
  std::vector<JointAction> out;
  JointAction action(n, 1);
  for (;;) {
    out.push_back(action);
    std::size_t i = n;
    while (i-- > 0) {
      if (action[i] < sys.move_count(state, static_cast<std::uint32_t>(i + 1))) {
        ++action[i];
        break;
      }
      action[i] = 1;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

namespace {

void validate_action(const CafAtsSystem& sys, std::size_t state,
                     const JointAction& action, std::size_t script_step) {
  if (action.size() != sys.agent_count())
    throw IllegalMove("joint action names " + std::to_string(action.size()) +
                          " moves for " + std::to_string(sys.agent_count()) +
                          " agents",
                      script_step);
  for (std::uint32_t i = 0; i < sys.agent_count(); ++i) {
    std::uint32_t limit = sys.move_count(state, i + 1);
    if (action[i] == 0 || action[i] > limit)
      throw IllegalMove("move " + std::to_string(action[i]) + " of agent " +
                            std::to_string(i + 1) + " is outside 1.." +
                            std::to_string(limit) + " at state '" +
                            sys.states()[state] + "'",
                        script_step);
  }
}

std::uint32_t next_caf(const CafAtsSystem& sys, std::uint32_t caf_index,
                       const JointAction& action) {
  auto it = sys.upsilon_entries().find({caf_index, action});
  return it == sys.upsilon_entries().end() ? caf_index : it->second;
}

}  // namespace

std::pair<std::size_t, std::uint32_t> step(const CafAtsSystem& sys,
                                           std::size_t state,
                                           const JointAction& action,
                                           std::uint32_t caf_index) {
  if (state >= sys.states().size())
    throw UnknownState("state index out of range");
  if (caf_index >= sys.cafs().size())
    throw Error("framework index out of range");
  validate_action(sys, state, action, 0);
  auto it = sys.transitions().find({static_cast<std::uint32_t>(state), action});
  if (it == sys.transitions().end())
    throw MissingTransition("no transition for the given action");
  return {it->second, next_caf(sys, caf_index, action)};
}

bool eval_zeta(const CafAtsSystem& sys, std::size_t state,
               std::string_view argument) {
  if (state >= sys.states().size())
    throw UnknownState("state index out of range");
  std::uint32_t caf_index = sys.state_caf(state);
  const ControlFramework& caf = sys.cafs()[caf_index];
  const auto& fixed = caf.fixed_arguments();
  for (std::size_t pos = 0; pos < fixed.size(); ++pos)
    if (caf.argument_name(fixed[pos]) == argument)
      return sys.zeta_controlled(caf_index, pos);
  throw UnknownArgument("'" + std::string(argument) +
                        "' is not a fixed argument of the framework bound to "
                        "state '" +
                        sys.states()[state] + "'");
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const CafAtsSystem& sys) : sys_(sys) {}

  bool eval(std::size_t state, const Formula& f) {
    const void* node = FormulaAccess::get(f);
    auto key = std::make_pair(node, state);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool value = compute(state, f);
    memo_.emplace(key, value);
    return value;
  }

 private:
  bool compute(std::size_t state, const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Prop: {
        const auto& props = sys_.propositions();
        for (std::size_t p = 0; p < props.size(); ++p)
          if (props[p] == f.token()) return sys_.has_label(state, p);
        throw UnknownProposition("proposition '" + f.token() +
                                 "' does not occur in the system");
      }
      case Formula::Kind::Zeta:
        return eval_zeta(sys_, state, f.token());
      case Formula::Kind::Not:
        return !eval(state, f.child());
      case Formula::Kind::And:
        return eval(state, f.lhs()) && eval(state, f.rhs());
      case Formula::Kind::Implies: {
        // Global implication: quantifies over every state, so the verdict
        // is the same wherever it is asked.
        for (std::size_t q = 0; q < sys_.states().size(); ++q)
          if (eval(q, f.lhs()) && !eval(q, f.rhs())) return false;
        return true;
      }
      case Formula::Kind::Coalition:
        return find_witness(state, f.agents(), f.child()).has_value();
    }
    throw Error("corrupt formula");
  }

 public:
  std::optional<PartialJointAction> find_witness(
      std::size_t state, const std::vector<std::uint32_t>& agents,
      const Formula& body) {
    for (std::uint32_t a : agents) {
      if (a == 0 || a > sys_.agent_count())
        throw UnknownAgent("agent " + std::to_string(a) +
                           " is not in the system");
    }
    auto actions = legal_joint_actions(sys_, state);

    // Candidate partial actions in lexicographic order over the ascending
    // coalition members.
    std::vector<std::uint32_t> candidate(agents.size(), 1);
    for (;;) {
      bool all_good = true;
      for (const JointAction& full : actions) {
        bool compatible = true;
        for (std::size_t k = 0; k < agents.size(); ++k) {
          if (full[agents[k] - 1] != candidate[k]) {
            compatible = false;
            break;
          }
        }
        if (!compatible) continue;
        auto it = sys_.transitions().find(
            {static_cast<std::uint32_t>(state), full});
        if (it == sys_.transitions().end())
          throw MissingTransition("no transition for a legal action");
        if (!eval(it->second, body)) {
          all_good = false;
          break;
        }
      }
      if (all_good) {
        PartialJointAction witness;
        for (std::size_t k = 0; k < agents.size(); ++k)
          witness.moves.emplace_back(agents[k], candidate[k]);
        return witness;
      }
      std::size_t i = agents.size();
      while (i-- > 0) {
        if (candidate[i] < sys_.move_count(state, agents[i])) {
          ++candidate[i];
          break;
        }
        candidate[i] = 1;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return std::nullopt;
  }

 private:
  struct KeyHash {
    std::size_t operator()(
        const std::pair<const void*, std::size_t>& k) const {
      return std::hash<const void*>()(k.first) ^
             (k.second * 0x9e3779b97f4a7c15ull);
    }
  };
  const CafAtsSystem& sys_;
  std::unordered_map<std::pair<const void*, std::size_t>, bool, KeyHash>
      memo_;
};

}  // namespace

bool satisfies(const CafAtsSystem& sys, std::size_t state, const Formula& f) {
  if (state >= sys.states().size())
    throw UnknownState("state index out of range");
  return Evaluator(sys).eval(state, f);
}

std::optional<PartialJointAction> witness_coalition_action(
    const CafAtsSystem& sys, std::size_t state,
    const std::vector<std::uint32_t>& agents, const Formula& body) {
  if (state >= sys.states().size())
    throw UnknownState("state index out of range");
  std::vector<std::uint32_t> sorted = agents;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return Evaluator(sys).find_witness(state, sorted, body);
}

namespace {

TraceRecord make_record(const CafAtsSystem& sys, std::size_t step_index,
                        std::size_t state, std::uint32_t caf_index) {
  TraceRecord rec;
  rec.step = step_index;
  rec.state = sys.states()[state];
  rec.caf_index = caf_index;
  for (std::uint32_t p : sys.labels_of(state))
    rec.props.push_back(sys.propositions()[p]);
  std::sort(rec.props.begin(), rec.props.end());
  const ControlFramework& caf = sys.cafs()[caf_index];
  const auto& fixed = caf.fixed_arguments();
  for (std::size_t pos = 0; pos < fixed.size(); ++pos)
    if (sys.zeta_controlled(caf_index, pos))
      rec.zeta_true.push_back(caf.argument_name(fixed[pos]));
  std::sort(rec.zeta_true.begin(), rec.zeta_true.end());
  return rec;
}

}  // namespace

std::vector<TraceRecord> simulate(const CafAtsSystem& sys, std::size_t state,
                                  const std::vector<JointAction>& script) {
  if (state >= sys.states().size())
    throw UnknownState("state index out of range");
  std::vector<TraceRecord> trace;
  std::uint32_t caf_index = sys.state_caf(state);
  trace.push_back(make_record(sys, 0, state, caf_index));
  for (std::size_t k = 0; k < script.size(); ++k) {
    validate_action(sys, state, script[k], k + 1);
    auto it = sys.transitions().find(
        {static_cast<std::uint32_t>(state), script[k]});
    if (it == sys.transitions().end())
      throw MissingTransition("no transition for a legal action");
    caf_index = next_caf(sys, caf_index, script[k]);
    state = it->second;
    trace.push_back(make_record(sys, k + 1, state, caf_index));
  }
  return trace;
}

}  // namespace cafcoal
