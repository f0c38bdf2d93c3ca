#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "synctl/comanche/library.hpp"
#include "synctl/comanche/platform.hpp"

namespace synctl::comanche {

/// The composed Comanche model: one fifo per monitored server interface,
/// lifecycles for the optional components, availability and position
/// automata, one cost instance per binding, and the contract over
/// pe_av / wl_ba / qos / exc (plus the pending property in async mode).
///
/// The interface mirrors the simulated main program: inputs
/// (disable, fifoH1F, fifoH2F, fifoL2F, addlog, c_startH2_done), outputs
/// the lifecycle command pulses for FS2 and L and the per-component
/// migration pulses c_mig{1..4}{f1,f2,d}.
inline Node comanche_main(const ComancheTopology& topo, const PlatformConfig& cfg,
                          bool async_mode) {
  cfg.check();
  topo.check(cfg);

  Node n;
  n.name = async_mode ? "comanche_async" : "comanche_sync";
  n.inputs = {{"disable", Type::boolean()},  {"fifoH1F", Type::boolean()},
              {"fifoH2F", Type::boolean()},  {"fifoL2F", Type::boolean()},
              {"addlog", Type::boolean()},   {"c_startH2_done", Type::boolean()}};

  auto pe_sym = [&](int i) { return lit_sym(peid_type(), "pe" + std::to_string(i)); };
  auto share = [](Node node) { return std::make_shared<Node>(std::move(node)); };
  auto fifo = share(fifo_node());
  auto lifecycle = share(lifecycle_node());
  auto proc = share(proc_node());

  // FIFO monitors for the components that report their queue state.
  for (const auto& c : topo.components) {
    if (c.fifo_event.empty()) continue;
    if (std::find_if(n.inputs.begin(), n.inputs.end(), [&](const FlowDecl& d) {
          return d.name == c.fifo_event;
        }) == n.inputs.end())
      throw ConfigError("fifo event " + c.fifo_event + " is not a model input");
    n.locals.push_back({"full_" + c.tag, Type::boolean()});
    n.instances.push_back(
        {"fifo_" + c.tag, fifo, {ref(c.fifo_event)}, {"full_" + c.tag}});
  }

  // Lifecycles for the optional components; fe per configured wiring.
  for (const auto& c : topo.components) {
    if (!c.lifecycle) continue;
    ExprPtr fe = cfg.fe_wiring == FeWiring::InputNot ? not_(ref(c.fifo_event))
                                                     : ref("full_" + c.tag);
    if (c.fifo_event.empty())
      throw ConfigError("lifecycle component " + c.name + " needs a monitored fifo");
    n.locals.push_back({"run_" + c.tag, Type::boolean()});
    n.locals.push_back({"disc_" + c.tag, Type::boolean()});
    n.instances.push_back({"lc_" + c.tag,
                           lifecycle,
                           {ref("ch_" + c.tag), fe, ref("s_" + c.tag)},
                           {"run_" + c.tag, "disc_" + c.tag, "c_start" + c.cmd_tag,
                            "c_stop" + c.cmd_tag, "c_connect" + c.cmd_tag,
                            "c_diconnect" + c.cmd_tag}});
  }

  // PE availability; only the scenario-driven input is real, the other
  // elements are wired to constant false.
  for (int i = 0; i < cfg.pe_count; ++i) {
    std::string on = "pe" + std::to_string(i) + "_on";
    n.locals.push_back({on, Type::boolean()});
    ExprPtr dis = (i == 3) ? ref("disable") : lit_bool(false);
    n.instances.push_back({"proc_pe" + std::to_string(i), proc, {dis}, {on}});
  }

  // Positions: an automaton per migratable component, a constant for the
  // pinned ones.
  for (const auto& c : topo.components) {
    std::string pos = "pos_" + c.tag;
    if (c.migratable) {
      auto posn = share(position_node(cfg.pe_count, c.initial_pe));
      std::vector<std::string> outs = {pos};
      for (int k = 0; k < cfg.pe_count; ++k)
        outs.push_back("c_mig" + std::to_string(k + 1) + c.mig_tag);
      n.locals.push_back({pos, Type::enumeration(peid_type())});
      n.instances.push_back({"map_" + c.tag,
                             posn,
                             {ref("a_" + c.mig_tag), ref("b_" + c.mig_tag)},
                             outs});
    } else {
      n.locals.push_back({pos, Type::enumeration(peid_type())});
      n.equations.emplace_back(pos, pe_sym(c.initial_pe));
    }
  }

  // One cost instance per binding; wl_i sums every binding's charge on pe_i.
  std::vector<std::vector<ExprPtr>> charges(static_cast<size_t>(cfg.pe_count));
  for (size_t b = 0; b < topo.bindings.size(); ++b) {
    const auto& bind = topo.bindings[b];
    auto cost = share(cost_node(bind.freq, bind.cost, cfg));
    std::vector<std::string> outs;
    for (int i = 0; i < cfg.pe_count; ++i) {
      std::string cp = "c" + std::to_string(b) + "_p" + std::to_string(i);
      outs.push_back(cp);
      n.locals.push_back({cp, Type::integer()});
      charges[static_cast<size_t>(i)].push_back(ref(cp));
    }
    n.instances.push_back({"cost" + std::to_string(b),
                           cost,
                           {ref("pos_" + topo.component(bind.client).tag),
                            ref("pos_" + topo.component(bind.server).tag)},
                           outs});
  }
  for (int i = 0; i < cfg.pe_count; ++i) {
    std::string wl = "wl" + std::to_string(i);
    n.locals.push_back({wl, Type::integer()});
    n.equations.emplace_back(wl, sum_of(charges[static_cast<size_t>(i)]));
  }

  // Objectives (all state predicates).
  std::vector<ExprPtr> av;
  for (int i = 0; i < cfg.pe_count; ++i) {
    std::vector<ExprPtr> on_pe;
    for (const auto& c : topo.components)
      if (c.migratable) on_pe.push_back(eq(ref("pos_" + c.tag), pe_sym(i)));
    av.push_back(or_(ref("pe" + std::to_string(i) + "_on"), not_(any_of(on_pe))));
  }
  n.locals.push_back({"pe_av", Type::boolean()});
  n.equations.emplace_back("pe_av", all_of(av));

  std::vector<ExprPtr> ba;
  for (int i = 0; i < cfg.pe_count; ++i)
    ba.push_back(le(ref("wl" + std::to_string(i)),
                    lit_int(cfg.max_load[static_cast<size_t>(i)])));
  n.locals.push_back({"wl_ba", Type::boolean()});
  n.equations.emplace_back("wl_ba", all_of(ba));

  n.locals.push_back({"qos", Type::boolean()});
  n.equations.emplace_back(
      "qos", and_(implies(not_(ref("full_S1")), ref("disc_S2")),
                  implies(and_(not_(ref("run_L")), ref("full_S1")),
                          and_(ref("run_S2"), not_(ref("disc_S2"))))));

  n.locals.push_back({"exc", Type::boolean()});
  n.equations.emplace_back(
      "exc", implies(and_(ref("run_L"), not_(ref("disc_L"))), ref("disc_S2")));

  Contract contract;
  if (async_mode) {
    n.locals.push_back({"pen_sS2", Type::boolean()});
    n.instances.push_back({"cmd_sS2",
                           share(command_node()),
                           {ref("c_startH2"), ref("c_startH2_done")},
                           {"pen_sS2"}});
    n.locals.push_back({"pend", Type::boolean()});
    n.equations.emplace_back("pend", not_(and_(ref("pen_sS2"), ref("disc_S2"))));
    contract.enforce =
        and_(and_(ref("pend"), and_(ref("pe_av"), ref("wl_ba"))),
             implies(not_(ref("pen_sS2")), and_(ref("qos"), ref("exc"))));
  } else {
    contract.enforce =
        and_(and_(ref("pe_av"), ref("wl_ba")), and_(ref("qos"), ref("exc")));
  }

  for (const auto& c : topo.components) {
    if (!c.migratable) continue;
    ExprPtr pos = ref("pos_" + c.tag);
    ExprPtr a_default, b_default;
    if (cfg.pe_count == 4) {
      a_default = or_(eq(pos, pe_sym(2)), eq(pos, pe_sym(3)));
      b_default = or_(eq(pos, pe_sym(1)), eq(pos, pe_sym(3)));
    } else {
      a_default = lit_bool(false);
      b_default = eq(pos, pe_sym(1));
    }
    contract.controllables.push_back({"a_" + c.mig_tag, Type::boolean(), a_default});
    contract.controllables.push_back({"b_" + c.mig_tag, Type::boolean(), b_default});
  }
  for (const auto& c : topo.components)
    if (c.lifecycle) {
      contract.controllables.push_back({"ch_" + c.tag, Type::boolean(), lit_bool(false)});
      contract.controllables.push_back({"s_" + c.tag, Type::boolean(), lit_bool(false)});
    }
  n.contract = std::move(contract);

  // Declared output order fixes the command expansion and trace column
  // order: lifecycle commands first, then migrations per component.
  for (const auto& c : topo.components)
    if (c.lifecycle)
      for (const char* verb : {"start", "stop", "connect", "diconnect"})
        n.outputs.push_back({"c_" + std::string(verb) + c.cmd_tag, Type::boolean()});
  for (const auto& c : topo.components)
    if (c.migratable)
      for (int k = 0; k < cfg.pe_count; ++k)
        n.outputs.push_back(
            {"c_mig" + std::to_string(k + 1) + c.mig_tag, Type::boolean()});
  return n;
}

inline Node comanche_main(bool async_mode) {
  return comanche_main(ComancheTopology::defaults(), PlatformConfig::defaults(),
                       async_mode);
}

}  // namespace synctl::comanche
