#pragma once

#include <memory>
#include <string>

#include "synctl/comanche/platform.hpp"
#include "synctl/node.hpp"

namespace synctl::comanche {

/// Component lifecycle: stopped / running / safe-stopping, with start,
/// stop, connect and disconnect command pulses on the transitions.
inline Node lifecycle_node() {
  Node n;
  n.name = "lifecycle";
  n.inputs = {{"ch", Type::boolean()}, {"fe", Type::boolean()}, {"s", Type::boolean()}};
  n.outputs = {{"run", Type::boolean()},   {"disc", Type::boolean()},
               {"start", Type::boolean()}, {"stop", Type::boolean()},
               {"connect", Type::boolean()}, {"disconnect", Type::boolean()}};
  Automaton a;
  Mode S{"S",
         {{"run", lit_bool(false)}, {"disc", lit_bool(true)}},
         {{ref("ch"), "R", {{"start", lit_bool(true)}, {"connect", lit_bool(true)}}}}};
  Mode R{"R",
         {{"run", lit_bool(true)}, {"disc", lit_bool(false)}},
         {{and_(ref("ch"), not_(ref("fe"))), "SS", {{"disconnect", lit_bool(true)}}},
          {or_(ref("s"), and_(ref("ch"), ref("fe"))), "S",
           {{"stop", lit_bool(true)}, {"disconnect", lit_bool(true)}}}}};
  Mode SS{"SS",
          {{"run", lit_bool(true)}, {"disc", lit_bool(true)}},
          {{or_(ref("fe"), ref("s")), "S", {{"stop", lit_bool(true)}}}}};
  a.modes = {S, R, SS};
  n.automata.push_back(a);
  return n;
}

/// FIFO occupancy: empty / above-threshold with the `full` state output.
inline Node fifo_node() {
  Node n;
  n.name = "fifo";
  n.inputs = {{"f", Type::boolean()}};
  n.outputs = {{"full", Type::boolean()}};
  Automaton a;
  a.modes = {
      Mode{"FE", {{"full", lit_bool(false)}}, {{ref("f"), "FF", {}}}},
      Mode{"FF", {{"full", lit_bool(true)}}, {{not_(ref("f")), "FE", {}}}},
  };
  n.automata.push_back(a);
  return n;
}

/// Component-to-PE mapping. The (a, b) pair encodes the requested target
/// (a is the high bit); reaching a different PE fires the matching
/// migration pulse. `pos` reports the PE hosting the component this step.
inline Node position_node(int pe_count, int initial_pe = 0) {
  if (pe_count != 2 && pe_count != 4)
    throw ConfigError("position model supports 2 or 4 processing elements");
  if (initial_pe < 0 || initial_pe >= pe_count)
    throw ConfigError("initial PE out of range");
  Node n;
  n.name = "position";
  n.inputs = {{"a", Type::boolean()}, {"b", Type::boolean()}};
  n.outputs.push_back({"pos", Type::enumeration(peid_type())});
  for (int k = 0; k < pe_count; ++k)
    n.outputs.push_back({"mig_" + std::to_string(k), Type::boolean()});

  auto target_is = [&](int k) {
    // target index = (2a + b) mod pe_count
    ExprPtr a = ref("a"), b = ref("b");
    if (pe_count == 2) return k == 1 ? b : not_(b);
    ExprPtr ae = (k & 2) ? a : not_(a);
    ExprPtr be = (k & 1) ? b : not_(b);
    return and_(ae, be);
  };

  Automaton aut;
  aut.initial = initial_pe;
  for (int i = 0; i < pe_count; ++i) {
    Mode m;
    m.name = "PE" + std::to_string(i);
    m.equations = {{"pos", lit_sym(peid_type(), "pe" + std::to_string(i))}};
    for (int k = 0; k < pe_count; ++k) {
      if (k == i) continue;
      m.transitions.push_back({target_is(k), "PE" + std::to_string(k),
                               {{"mig_" + std::to_string(k), lit_bool(true)}}});
    }
    aut.modes.push_back(std::move(m));
  }
  n.automata.push_back(std::move(aut));
  return n;
}

/// Processing-element availability: available until disabled.
inline Node proc_node() {
  Node n;
  n.name = "proc";
  n.inputs = {{"dis", Type::boolean()}};
  n.outputs = {{"on", Type::boolean()}};
  Automaton a;
  a.modes = {
      Mode{"ON", {{"on", lit_bool(true)}}, {{ref("dis"), "OFF", {}}}},
      Mode{"OFF", {{"on", lit_bool(false)}}, {{not_(ref("dis")), "ON", {}}}},
  };
  n.automata.push_back(a);
  return n;
}

/// Per-binding workload: the server's PE is charged f*c and the client's
/// PE is charged f*distance(client, server).
inline Node cost_node(int64_t f, int64_t c, const PlatformConfig& cfg) {
  if (f < 0 || c < 0) throw ConfigError("cost parameters must be non-negative");
  Node n;
  n.name = "cost";
  n.inputs = {{"posC", Type::enumeration(peid_type())},
              {"posS", Type::enumeration(peid_type())}};
  auto pe = [&](int i) { return lit_sym(peid_type(), "pe" + std::to_string(i)); };

  // f * distance(posC, posS) selected by nested conditionals.
  auto comm_cost_from = [&](int i) {
    ExprPtr e = lit_int(f * cfg.distance(i, cfg.pe_count - 1));
    for (int j = cfg.pe_count - 2; j >= 0; --j)
      e = ite(eq(ref("posS"), pe(j)), lit_int(f * cfg.distance(i, j)), e);
    return e;
  };
  ExprPtr comm = comm_cost_from(cfg.pe_count - 1);
  for (int i = cfg.pe_count - 2; i >= 0; --i)
    comm = ite(eq(ref("posC"), pe(i)), comm_cost_from(i), comm);
  Equation comm_eq{"comm", comm};
  n.locals.push_back({"comm", Type::integer()});
  n.equations.push_back(comm_eq);

  for (int i = 0; i < cfg.pe_count; ++i) {
    std::string out = "cp" + std::to_string(i);
    n.outputs.push_back({out, Type::integer()});
    n.equations.emplace_back(
        out, add(ite(eq(ref("posS"), pe(i)), lit_int(f * c), lit_int(0)),
                 ite(eq(ref("posC"), pe(i)), ref("comm"), lit_int(0))));
  }
  return n;
}

/// Asynchronous action tracker: pending from the instant the command is
/// fired until its completion is acknowledged.
inline Node command_node() {
  Node n;
  n.name = "command";
  n.inputs = {{"do", Type::boolean()}, {"done", Type::boolean()}};
  n.outputs = {{"pending", Type::boolean()}};
  Automaton a;
  a.modes = {
      Mode{"D", {{"pending", lit_bool(false)}}, {{ref("do"), "P", {}}}},
      Mode{"P", {{"pending", lit_bool(true)}}, {{ref("done"), "D", {}}}},
  };
  n.automata.push_back(a);
  return n;
}

/// A task whose activation can be delayed: a request is granted or parked
/// in a waiting state depending on the `c` input.
inline Node delayable_node() {
  Node n;
  n.name = "delayable";
  n.inputs = {{"r", Type::boolean()}, {"c", Type::boolean()}, {"e", Type::boolean()}};
  n.outputs = {{"a", Type::boolean()}, {"s", Type::boolean()}};
  Automaton aut;
  aut.modes = {
      Mode{"Idle",
           {{"a", lit_bool(false)}, {"s", and_(ref("r"), ref("c"))}},
           {{and_(ref("r"), ref("c")), "Active", {}},
            {and_(ref("r"), not_(ref("c"))), "Wait", {}}}},
      Mode{"Wait",
           {{"a", lit_bool(false)}, {"s", ref("c")}},
           {{ref("c"), "Active", {}}}},
      Mode{"Active",
           {{"a", lit_bool(true)}, {"s", lit_bool(false)}},
           {{ref("e"), "Idle", {}}}},
  };
  n.automata.push_back(std::move(aut));
  return n;
}

/// Two delayable tasks in lockstep under a mutual-exclusion contract; the
/// grant inputs c1, c2 are left to the synthesized controller.
inline Node twotasks_node() {
  Node n;
  n.name = "twotasks";
  n.inputs = {{"r1", Type::boolean()}, {"e1", Type::boolean()},
              {"r2", Type::boolean()}, {"e2", Type::boolean()}};
  n.outputs = {{"a1", Type::boolean()}, {"s1", Type::boolean()},
               {"a2", Type::boolean()}, {"s2", Type::boolean()}};
  auto sub = std::make_shared<Node>(delayable_node());
  n.instances.push_back({"t1", sub, {ref("r1"), ref("c1"), ref("e1")}, {"a1", "s1"}});
  n.instances.push_back({"t2", sub, {ref("r2"), ref("c2"), ref("e2")}, {"a2", "s2"}});
  Contract c;
  c.enforce = not_(and_(ref("a1"), ref("a2")));
  c.controllables = {{"c1", Type::boolean(), lit_bool(true)},
                     {"c2", Type::boolean(), lit_bool(true)}};
  n.contract = c;
  return n;
}

}  // namespace synctl::comanche
