#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "synctl/node.hpp"

namespace synctl {

namespace detail {

inline ExprPtr rename_expr(const Expr& e,
                           const std::unordered_map<std::string, std::string>& map) {
  auto out = std::make_shared<Expr>();
  out->op = e.op;
  out->lit = e.lit;
  if (e.op == Op::Ref) {
    auto it = map.find(e.ref);
    out->ref = it == map.end() ? e.ref : it->second;
  }
  out->args.reserve(e.args.size());
  for (const auto& a : e.args) out->args.push_back(rename_expr(*a, map));
  return out;
}

inline std::vector<Equation> rename_equations(
    const std::vector<Equation>& eqs,
    const std::unordered_map<std::string, std::string>& map) {
  std::vector<Equation> out;
  out.reserve(eqs.size());
  for (const auto& [f, e] : eqs) {
    auto it = map.find(f);
    out.emplace_back(it == map.end() ? f : it->second, rename_expr(*e, map));
  }
  return out;
}

}  // namespace detail

/// Synchronous composition: inlines every sub-node instance so that one
/// step of the result equals one lockstep step of all instances. Instance
/// flows are renamed `<instance>__<flow>`; instance outputs take the
/// parent's binding names directly, instance inputs become local flows
/// defined by the wiring expressions. Contracts of sub-nodes are not
/// inherited (only the parent's contract survives).
inline Node compose(const Node& parent) {
  Node flat;
  flat.name = parent.name;
  flat.inputs = parent.inputs;
  flat.outputs = parent.outputs;
  flat.locals = parent.locals;
  flat.enum_types = parent.enum_types;
  flat.equations = parent.equations;
  flat.automata = parent.automata;
  flat.contract = parent.contract;

  for (const auto& inst : parent.instances) {
    if (!inst.node) throw WiringError("instance " + inst.name + " has no node");
    Node sub = compose(*inst.node);  // flatten recursively first

    if (inst.input_exprs.size() != sub.inputs.size() +
            (sub.contract ? sub.contract->controllables.size() : 0) &&
        inst.input_exprs.size() != sub.inputs.size())
      throw WiringError("instance " + inst.name + ": expected " +
                        std::to_string(sub.inputs.size()) + " input expressions");
    if (inst.output_names.size() > sub.outputs.size())
      throw WiringError("instance " + inst.name + ": too many output bindings");

    for (const auto& et : sub.enum_types) {
      bool present = false;
      for (const auto& fe : flat.enum_types) present = present || same_enum(fe, et);
      if (!present) flat.enum_types.push_back(et);
    }

    std::unordered_map<std::string, std::string> ren;
    auto local_name = [&](const std::string& f) { return inst.name + "__" + f; };

    // Outputs bound by position; unbound trailing outputs become locals.
    for (size_t i = 0; i < sub.outputs.size(); ++i) {
      if (i < inst.output_names.size() && !inst.output_names[i].empty()) {
        ren[sub.outputs[i].name] = inst.output_names[i];
      } else {
        ren[sub.outputs[i].name] = local_name(sub.outputs[i].name);
        flat.locals.push_back({local_name(sub.outputs[i].name), sub.outputs[i].type});
      }
    }
    // Inputs (and, for instantiated nodes with contracts, controllables in
    // declaration order after the inputs) become wired locals.
    std::vector<FlowDecl> in_decls = sub.inputs;
    if (sub.contract && inst.input_exprs.size() > sub.inputs.size())
      for (const auto& c : sub.contract->controllables)
        in_decls.push_back({c.name, c.type});
    if (inst.input_exprs.size() != in_decls.size())
      throw WiringError("instance " + inst.name + ": input arity mismatch");
    for (size_t i = 0; i < in_decls.size(); ++i) {
      ren[in_decls[i].name] = local_name(in_decls[i].name);
      flat.locals.push_back({local_name(in_decls[i].name), in_decls[i].type});
      flat.equations.emplace_back(local_name(in_decls[i].name), inst.input_exprs[i]);
    }
    for (const auto& l : sub.locals) {
      ren[l.name] = local_name(l.name);
      flat.locals.push_back({local_name(l.name), l.type});
    }

    for (const auto& [f, e] : detail::rename_equations(sub.equations, ren))
      flat.equations.emplace_back(f, e);
    for (const auto& aut : sub.automata) {
      Automaton copy;
      copy.initial = aut.initial;
      for (const auto& m : aut.modes) {
        Mode mc;
        mc.name = m.name;
        mc.equations = detail::rename_equations(m.equations, ren);
        for (const auto& t : m.transitions) {
          Transition tc;
          tc.guard = detail::rename_expr(*t.guard, ren);
          tc.target = t.target;
          tc.emissions = detail::rename_equations(t.emissions, ren);
          mc.transitions.push_back(std::move(tc));
        }
        copy.modes.push_back(std::move(mc));
      }
      flat.automata.push_back(std::move(copy));
    }
  }
  return flat;
}

}  // namespace synctl
