#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "synctl/expr.hpp"

namespace synctl {

struct FlowDecl {
  std::string name;
  Type type;

  friend bool operator==(const FlowDecl& a, const FlowDecl& b) {
    return a.name == b.name && a.type == b.type;
  }
};

using Equation = std::pair<std::string, ExprPtr>;

/// A transition out of a mode: `until guard / emissions then target`.
/// At most one transition fires per automaton per step, first true guard
/// in declaration order. Emissions pulse on the firing step only.
struct Transition {
  ExprPtr guard;
  std::string target;
  std::vector<Equation> emissions;
};

/// A mode of an automaton: state equations active while the mode is the
/// current one, plus the ordered transition list.
struct Mode {
  std::string name;
  std::vector<Equation> equations;
  std::vector<Transition> transitions;
};

/// A mode automaton with a declared initial mode.
struct Automaton {
  std::vector<Mode> modes;
  int initial = 0;
};

struct ControllableDecl {
  std::string name;
  Type type;
  ExprPtr default_expr;  // over current state; may be null (type default)
};

/// Synthesis objective: a state predicate to keep invariant plus the
/// controllable variables the synthesized controller may set.
struct Contract {
  ExprPtr enforce;
  std::vector<ControllableDecl> controllables;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// A named sub-node instance: inputs wired to parent expressions (in the
/// callee's declared input order, controllables appended after inputs),
/// outputs bound to parent flow names (in the callee's declared order).
struct Instance {
  std::string name;
  NodePtr node;
  std::vector<ExprPtr> input_exprs;
  std::vector<std::string> output_names;
};

/// A synchronous program fragment: typed flows, equations, mode automata,
/// sub-node instances and an optional contract.
struct Node {
  std::string name;
  std::vector<FlowDecl> inputs;
  std::vector<FlowDecl> outputs;
  std::vector<FlowDecl> locals;
  std::vector<EnumTypePtr> enum_types;  // enums in scope (peid is implicit)
  std::vector<Equation> equations;
  std::vector<Automaton> automata;
  std::vector<Instance> instances;
  std::optional<Contract> contract;

  /// Looks up a declared flow (inputs, outputs, locals or contract
  /// controllables); returns the type if declared.
  std::optional<Type> find_type(const std::string& n) const {
    for (const auto* v : {&inputs, &outputs, &locals})
      for (const auto& d : *v)
        if (d.name == n) return d.type;
    if (contract)
      for (const auto& c : contract->controllables)
        if (c.name == n) return c.type;
    return std::nullopt;
  }

  EnumTypePtr find_enum(const std::string& n) const {
    if (n == "peid") return peid_type();
    for (const auto& e : enum_types)
      if (e->name == n) return e;
    return nullptr;
  }

  /// Resolves a bare identifier as an enum symbol, if any enum in scope
  /// declares it.
  EnumTypePtr enum_of_symbol(const std::string& sym) const {
    if (peid_type()->index_of(sym) >= 0) return peid_type();
    for (const auto& e : enum_types)
      if (e->index_of(sym) >= 0) return e;
    return nullptr;
  }
};

inline bool equations_equal(const std::vector<Equation>& a,
                            const std::vector<Equation>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].first != b[i].first || !expr_equal(a[i].second, b[i].second))
      return false;
  return true;
}

/// Deep structural equality over nodes (declaration order matters).
inline bool node_equal(const Node& a, const Node& b) {
  if (a.name != b.name || a.inputs != b.inputs || a.outputs != b.outputs ||
      a.locals != b.locals)
    return false;
  if (a.enum_types.size() != b.enum_types.size()) return false;
  for (size_t i = 0; i < a.enum_types.size(); ++i)
    if (!same_enum(a.enum_types[i], b.enum_types[i])) return false;
  if (!equations_equal(a.equations, b.equations)) return false;
  if (a.automata.size() != b.automata.size()) return false;
  for (size_t i = 0; i < a.automata.size(); ++i) {
    if (a.automata[i].initial != b.automata[i].initial) return false;
    const auto& ma = a.automata[i].modes;
    const auto& mb = b.automata[i].modes;
    if (ma.size() != mb.size()) return false;
    for (size_t j = 0; j < ma.size(); ++j) {
      if (ma[j].name != mb[j].name) return false;
      if (!equations_equal(ma[j].equations, mb[j].equations)) return false;
      if (ma[j].transitions.size() != mb[j].transitions.size()) return false;
      for (size_t k = 0; k < ma[j].transitions.size(); ++k) {
        const auto& ta = ma[j].transitions[k];
        const auto& tb = mb[j].transitions[k];
        if (ta.target != tb.target || !expr_equal(ta.guard, tb.guard) ||
            !equations_equal(ta.emissions, tb.emissions))
          return false;
      }
    }
  }
  if (a.instances.size() != b.instances.size()) return false;
  for (size_t i = 0; i < a.instances.size(); ++i) {
    const auto& ia = a.instances[i];
    const auto& ib = b.instances[i];
    if (ia.name != ib.name || ia.output_names != ib.output_names) return false;
    if (ia.input_exprs.size() != ib.input_exprs.size()) return false;
    for (size_t j = 0; j < ia.input_exprs.size(); ++j)
      if (!expr_equal(ia.input_exprs[j], ib.input_exprs[j])) return false;
    if (!ia.node || !ib.node || !node_equal(*ia.node, *ib.node)) return false;
  }
  if (a.contract.has_value() != b.contract.has_value()) return false;
  if (a.contract) {
    if (!expr_equal(a.contract->enforce, b.contract->enforce)) return false;
    const auto& ca = a.contract->controllables;
    const auto& cb = b.contract->controllables;
    if (ca.size() != cb.size()) return false;
    for (size_t i = 0; i < ca.size(); ++i) {
      if (ca[i].name != cb[i].name || !(ca[i].type == cb[i].type)) return false;
      if (!expr_equal(ca[i].default_expr, cb[i].default_expr)) return false;
    }
  }
  return true;
}

/// The memory of a node between steps: one active mode per automaton, in
/// automaton declaration order. Value semantics; two equal states behave
/// identically under identical inputs.
struct ProgramState {
  std::vector<int> modes;

  friend bool operator==(const ProgramState& a, const ProgramState& b) {
    return a.modes == b.modes;
  }
  friend bool operator!=(const ProgramState& a, const ProgramState& b) {
    return !(a == b);
  }
};

struct ProgramStateHash {
  size_t operator()(const ProgramState& s) const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (int m : s.modes)
      h = (h ^ static_cast<size_t>(m)) * 0x100000001b3ull;
    return h;
  }
};

}  // namespace synctl
