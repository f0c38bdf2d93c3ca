#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "synctl/compile.hpp"

namespace synctl {

/// Mixed-radix index over a list of finite flow domains. Combo ids are
/// dense in [0, size()); digit order follows the flow list.
class DomainIndex {
 public:
  DomainIndex() = default;
  DomainIndex(const CompiledNode& node, const std::vector<int>& flow_ids)
      : flow_ids_(flow_ids) {
    size_ = 1;
    for (int id : flow_ids_) {
      const Type& t = node.flow(id).type;
      if (!t.finite())
        throw NonFiniteDomainError(node.name() + ": flow " + node.flow(id).name +
                                   " has no finite domain");
      int64_t d = t.domain_size();
      radix_.push_back(d);
      lo_.push_back(t.kind == Kind::Int ? t.lo : 0);
      if (size_ > (int64_t{1} << 40) / d)
        throw NonFiniteDomainError(node.name() + ": input domain too large");
      size_ *= d;
    }
  }

  int64_t size() const { return size_; }
  const std::vector<int>& flow_ids() const { return flow_ids_; }

  /// Writes combo `idx` into dense slots.
  void write(int64_t idx, int64_t* slots) const {
    for (size_t i = 0; i < flow_ids_.size(); ++i) {
      slots[flow_ids_[i]] = lo_[i] + idx % radix_[i];
      idx /= radix_[i];
    }
  }

  /// Digit of flow position `i` within combo `idx` (raw slot value).
  int64_t digit(int64_t idx, size_t i) const {
    for (size_t k = 0; k < i; ++k) idx /= radix_[k];
    return lo_[i] + idx % radix_[i];
  }

  /// Combo id of the digits currently present in `slots`.
  int64_t index_of(const int64_t* slots) const {
    int64_t idx = 0, mult = 1;
    for (size_t i = 0; i < flow_ids_.size(); ++i) {
      idx += (slots[flow_ids_[i]] - lo_[i]) * mult;
      mult *= radix_[i];
    }
    return idx;
  }

  Valuation decode(const CompiledNode& node, int64_t idx) const {
    Valuation v;
    for (size_t i = 0; i < flow_ids_.size(); ++i) {
      v.emplace(node.flow(flow_ids_[i]).name,
                node.to_value(flow_ids_[i], digit(idx, i)));
      idx /= radix_[i];
    }
    return v;
  }

 private:
  std::vector<int> flow_ids_;
  std::vector<int64_t> radix_;
  std::vector<int64_t> lo_;
  int64_t size_ = 1;
};

/// Dense interning of program states.
class StateIndex {
 public:
  explicit StateIndex(size_t automata) : automata_(automata) {}

  int intern(const ProgramState& s) {
    auto [it, fresh] = ids_.emplace(s, static_cast<int>(states_.size()));
    if (fresh) states_.push_back(s);
    return it->second;
  }
  int find(const ProgramState& s) const {
    auto it = ids_.find(s);
    return it == ids_.end() ? -1 : it->second;
  }
  const ProgramState& state(int id) const { return states_[static_cast<size_t>(id)]; }
  size_t size() const { return states_.size(); }
  size_t automata() const { return automata_; }

 private:
  size_t automata_;
  std::vector<ProgramState> states_;
  std::unordered_map<ProgramState, int, ProgramStateHash> ids_;
};

/// Explicit reachable state graph: every state reachable from reset under
/// any input sequence, with one labeled edge per (state, input combo).
struct StateGraph {
  StateIndex states{0};
  DomainIndex inputs;                      // inputs and controllables
  std::vector<std::vector<int>> edges;     // edges[s][combo] = successor id
  int initial = 0;
};

inline constexpr int64_t kDefaultStateBudget = 5'000'000;

inline StateGraph enumerate_reachable(const CompiledNode& node,
                                      int64_t state_budget = kDefaultStateBudget) {
  std::vector<int> bindable = node.input_ids();
  for (int id : node.controllable_ids()) bindable.push_back(id);

  StateGraph g;
  g.inputs = DomainIndex(node, bindable);
  g.states = StateIndex(node.automata().size());
  g.initial = g.states.intern(node.reset());

  std::vector<int64_t> slots(static_cast<size_t>(node.n_flows()), 0);
  std::vector<int> fired(node.automata().size());
  ProgramState next;
  next.modes.resize(node.automata().size());

  std::deque<int> work{g.initial};
  while (!work.empty()) {
    int sid = work.front();
    work.pop_front();
    if (static_cast<size_t>(sid) >= g.edges.size()) g.edges.resize(g.states.size());
    auto& row = g.edges[static_cast<size_t>(sid)];
    row.resize(static_cast<size_t>(g.inputs.size()));
    ProgramState cur = g.states.state(sid);  // copy: interning may rehash
    for (int64_t u = 0; u < g.inputs.size(); ++u) {
      g.inputs.write(u, slots.data());
      node.run_plan(cur.modes, slots.data(), fired.data());
      node.apply_fired(cur.modes, fired.data(), next.modes.data());
      size_t before = g.states.size();
      int tid = g.states.intern(next);
      row[static_cast<size_t>(u)] = tid;
      if (g.states.size() > before) {
        if (static_cast<int64_t>(g.states.size()) > state_budget)
          throw StateBudgetExceededError(node.name() + ": reachable state budget (" +
                                         std::to_string(state_budget) + ") exceeded");
        work.push_back(tid);
      }
    }
  }
  g.edges.resize(g.states.size());
  return g;
}

inline StateGraph enumerate_reachable(const Node& node,
                                      int64_t state_budget = kDefaultStateBudget) {
  CompiledNode c(node);
  return enumerate_reachable(c, state_budget);
}

}  // namespace synctl
