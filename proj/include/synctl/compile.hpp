#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "synctl/compose.hpp"
#include "synctl/node.hpp"

namespace synctl {

/// Expression with flow references resolved to dense slot indices.
struct CExpr {
  Op op = Op::Lit;
  int flow = -1;       // Op::Ref
  int64_t litv = 0;    // Op::Lit
  std::vector<CExpr> args;
};

inline int64_t eval_cexpr(const CExpr& e, const int64_t* slots) {
  switch (e.op) {
    case Op::Lit: return e.litv;
    case Op::Ref: return slots[e.flow];
    case Op::Not: return !eval_cexpr(e.args[0], slots);
    case Op::And: return eval_cexpr(e.args[0], slots) && eval_cexpr(e.args[1], slots);
    case Op::Or: return eval_cexpr(e.args[0], slots) || eval_cexpr(e.args[1], slots);
    case Op::Implies:
      return !eval_cexpr(e.args[0], slots) || eval_cexpr(e.args[1], slots);
    case Op::Eq: return eval_cexpr(e.args[0], slots) == eval_cexpr(e.args[1], slots);
    case Op::Le: return eval_cexpr(e.args[0], slots) <= eval_cexpr(e.args[1], slots);
    case Op::Add:
      return saturate(eval_cexpr(e.args[0], slots) + eval_cexpr(e.args[1], slots));
    case Op::Mul:
      return saturate(eval_cexpr(e.args[0], slots) * eval_cexpr(e.args[1], slots));
    case Op::Ite:
      return eval_cexpr(e.args[eval_cexpr(e.args[0], slots) ? 1 : 2], slots);
  }
  return 0;
}

enum class FlowRole : uint8_t { Input, Controllable, Output, Local };
enum class DefKind : uint8_t { Input, Equation, StateEq, Pulse };

struct FlowInfo {
  std::string name;
  Type type;
  FlowRole role = FlowRole::Local;
  DefKind def = DefKind::Input;
  int def_automaton = -1;       // StateEq / Pulse
  bool state_determined = false;
};

struct CTransition {
  CExpr guard;
  int target = 0;
  std::vector<std::pair<int, CExpr>> emissions;  // (flow slot, value expr)
};

struct CMode {
  std::string name;
  std::vector<CTransition> transitions;
};

struct CAutomaton {
  std::vector<CMode> modes;
  std::vector<int> pulse_flows;
};

/// State equations of one flow across all modes of one automaton.
struct StateEqUnit {
  int automaton = -1;
  int flow = -1;
  std::vector<CExpr> per_mode;
};

/// One entry of the step evaluation plan, in dependency order.
struct PlanStep {
  enum class K : uint8_t { Eq, StateEq, Fire };
  K kind;
  int index;  // Eq: equation index, StateEq: unit index, Fire: automaton index
};

struct StepResult {
  Valuation outputs;
  ProgramState next;
};

/// A validated, flattened node with a dense step evaluator. Building one
/// performs the whole-node validation (definition completeness, typing,
/// instantaneous-cycle detection, contract well-formedness).
class CompiledNode {
 public:
  explicit CompiledNode(const Node& node) { build(node); }

  const Node& source() const { return flat_; }
  const std::string& name() const { return flat_.name; }

  int n_flows() const { return static_cast<int>(flows_.size()); }
  const std::vector<FlowInfo>& flows() const { return flows_; }
  const FlowInfo& flow(int id) const { return flows_[static_cast<size_t>(id)]; }
  int flow_id(const std::string& name) const {
    auto it = flow_ids_.find(name);
    if (it == flow_ids_.end()) throw UnboundFlowError(name);
    return it->second;
  }
  bool has_flow(const std::string& name) const { return flow_ids_.count(name) > 0; }

  const std::vector<int>& input_ids() const { return input_ids_; }
  const std::vector<int>& controllable_ids() const { return controllable_ids_; }
  const std::vector<int>& output_ids() const { return output_ids_; }
  const std::vector<CAutomaton>& automata() const { return automata_; }
  const std::vector<PlanStep>& plan() const { return plan_; }
  const std::vector<StateEqUnit>& state_eq_units() const { return state_eqs_; }

  /// Flow ids read / written by a plan step (conservative across modes).
  const std::vector<int>& step_deps(size_t i) const { return plan_deps_[i]; }
  const std::vector<int>& step_defs(size_t i) const { return plan_defs_[i]; }

  bool has_contract() const { return flat_.contract.has_value(); }
  const CExpr& enforce() const { return enforce_; }
  const std::vector<CExpr>& controllable_defaults() const { return ctrl_defaults_; }

  ProgramState reset() const {
    ProgramState s;
    s.modes = initial_modes_;
    return s;
  }

  void check_state(const ProgramState& s) const {
    if (s.modes.size() != automata_.size())
      throw ValidationError("state does not match node automata");
    for (size_t a = 0; a < automata_.size(); ++a)
      if (s.modes[a] < 0 ||
          s.modes[a] >= static_cast<int>(automata_[a].modes.size()))
        throw ValidationError("invalid active mode");
  }

  /// Writes a valuation into dense slots, enforcing declared typing.
  /// `names` must cover inputs and controllables exactly.
  void bind_inputs(const Valuation& vals, int64_t* slots) const {
    size_t used = 0;
    for (int id : input_ids_) used += bind_one(vals, id, slots);
    for (int id : controllable_ids_) used += bind_one(vals, id, slots);
    if (used != vals.size())
      for (const auto& [k, v] : vals)
        if (!flow_ids_.count(k) || !is_bindable(flow_ids_.at(k)))
          throw ValidationError(name() + ": not an input flow: " + k);
  }

  /// Evaluates the full plan. `slots` must have inputs bound; `fired`
  /// receives the firing transition index per automaton (-1 if none).
  void run_plan(std::span<const int> modes, int64_t* slots, int* fired) const {
    for (const auto& st : plan_) {
      switch (st.kind) {
        case PlanStep::K::Eq: {
          const auto& [flowid, ce] = equations_[static_cast<size_t>(st.index)];
          slots[flowid] = eval_cexpr(ce, slots);
          break;
        }
        case PlanStep::K::StateEq: {
          const auto& u = state_eqs_[static_cast<size_t>(st.index)];
          slots[u.flow] = eval_cexpr(u.per_mode[static_cast<size_t>(modes[u.automaton])], slots);
          break;
        }
        case PlanStep::K::Fire: {
          const auto& aut = automata_[static_cast<size_t>(st.index)];
          const auto& mode = aut.modes[static_cast<size_t>(modes[st.index])];
          int f = -1;
          for (size_t t = 0; t < mode.transitions.size(); ++t)
            if (eval_cexpr(mode.transitions[t].guard, slots)) {
              f = static_cast<int>(t);
              break;
            }
          fired[st.index] = f;
          for (int pf : aut.pulse_flows) slots[pf] = 0;
          if (f >= 0)
            for (const auto& [pf, ce] : mode.transitions[static_cast<size_t>(f)].emissions)
              slots[pf] = eval_cexpr(ce, slots);
          break;
        }
      }
    }
  }

  void apply_fired(std::span<const int> modes, const int* fired, int* next) const {
    for (size_t a = 0; a < automata_.size(); ++a) {
      next[a] = modes[a];
      if (fired[a] >= 0)
        next[a] = automata_[a]
                      .modes[static_cast<size_t>(modes[a])]
                      .transitions[static_cast<size_t>(fired[a])]
                      .target;
    }
  }

  /// One synchronous reaction. Deterministic; throws on unbound inputs,
  /// type mismatches or out-of-range values.
  StepResult step(const ProgramState& state, const Valuation& inputs) const {
    check_state(state);
    std::vector<int64_t> slots(flows_.size(), 0);
    bind_inputs(inputs, slots.data());
    std::vector<int> fired(automata_.size(), -1);
    run_plan(state.modes, slots.data(), fired.data());
    check_ranges(slots.data());
    StepResult r;
    r.next.modes.resize(automata_.size());
    apply_fired(state.modes, fired.data(), r.next.modes.data());
    for (int id : output_ids_)
      r.outputs.emplace(flows_[static_cast<size_t>(id)].name,
                        to_value(id, slots[static_cast<size_t>(id)]));
    return r;
  }

  /// Evaluates only the state-determined flows for a given configuration.
  /// This is what contracts and controllable defaults read.
  void eval_state_env(std::span<const int> modes, int64_t* slots) const {
    for (const auto& st : plan_) {
      if (st.kind == PlanStep::K::Eq) {
        const auto& [flowid, ce] = equations_[static_cast<size_t>(st.index)];
        if (flows_[static_cast<size_t>(flowid)].state_determined)
          slots[flowid] = eval_cexpr(ce, slots);
      } else if (st.kind == PlanStep::K::StateEq) {
        const auto& u = state_eqs_[static_cast<size_t>(st.index)];
        if (flows_[static_cast<size_t>(u.flow)].state_determined)
          slots[u.flow] = eval_cexpr(u.per_mode[static_cast<size_t>(modes[u.automaton])], slots);
      }
    }
  }

  /// Contract predicate on a configuration (post-transition evaluation is
  /// the caller passing the successor's modes).
  bool state_predicate(std::span<const int> modes, int64_t* scratch) const {
    eval_state_env(modes, scratch);
    return eval_cexpr(enforce_, scratch) != 0;
  }

  Value to_value(int id, int64_t raw) const {
    const Type& t = flows_[static_cast<size_t>(id)].type;
    switch (t.kind) {
      case Kind::Bool: return Value::boolean(raw != 0);
      case Kind::Int: return Value::integer(raw);
      case Kind::Enum: return Value::symbol(t.enum_type, static_cast<int>(raw));
    }
    return Value::boolean(false);
  }

  int64_t from_value(int id, const Value& v) const {
    const Type& t = flows_[static_cast<size_t>(id)].type;
    if (v.kind != t.kind)
      throw TypeMismatchError(name() + ": wrong value kind for flow " +
                              flows_[static_cast<size_t>(id)].name);
    if (t.kind == Kind::Enum && !same_enum(v.enum_type, t.enum_type))
      throw TypeMismatchError(name() + ": wrong enum for flow " +
                              flows_[static_cast<size_t>(id)].name);
    if (t.kind == Kind::Int && t.ranged && (v.num < t.lo || v.num > t.hi))
      throw TypeMismatchError(name() + ": value out of declared bounds for " +
                              flows_[static_cast<size_t>(id)].name);
    return v.num;
  }

 private:
  bool is_bindable(int id) const {
    auto r = flows_[static_cast<size_t>(id)].role;
    return r == FlowRole::Input || r == FlowRole::Controllable;
  }

  size_t bind_one(const Valuation& vals, int id, int64_t* slots) const {
    auto it = vals.find(flows_[static_cast<size_t>(id)].name);
    if (it == vals.end())
      throw UnboundFlowError(flows_[static_cast<size_t>(id)].name);
    slots[id] = from_value(id, it->second);
    return 1;
  }

  void check_ranges(const int64_t* slots) const {
    for (int id : ranged_flows_) {
      const Type& t = flows_[static_cast<size_t>(id)].type;
      if (slots[id] < t.lo || slots[id] > t.hi)
        throw TypeMismatchError(name() + ": computed value out of bounds for " +
                                flows_[static_cast<size_t>(id)].name);
    }
  }

  // ---- construction ----

  struct Unit {  // a definition unit for dependency ordering
    PlanStep::K kind;
    int index;
    std::vector<int> defs;
    std::vector<int> deps;
  };

  void build(const Node& node) {
    flat_ = node.instances.empty() ? node : compose(node);
    const Node& n = flat_;

    check_enum_scope(n);

    auto add_flow = [&](const std::string& fname, const Type& t, FlowRole role) {
      if (flow_ids_.count(fname))
        throw ValidationError(n.name + ": duplicate flow declaration: " + fname);
      if (n.enum_of_symbol(fname))
        throw ValidationError(n.name + ": flow name " + fname +
                              " collides with an enum symbol in scope");
      int id = static_cast<int>(flows_.size());
      flow_ids_.emplace(fname, id);
      flows_.push_back(FlowInfo{fname, t, role, DefKind::Input, -1, false});
      return id;
    };
    for (const auto& d : n.inputs) input_ids_.push_back(add_flow(d.name, d.type, FlowRole::Input));
    if (n.contract)
      for (const auto& c : n.contract->controllables)
        controllable_ids_.push_back(add_flow(c.name, c.type, FlowRole::Controllable));
    for (const auto& d : n.outputs) output_ids_.push_back(add_flow(d.name, d.type, FlowRole::Output));
    for (const auto& d : n.locals) add_flow(d.name, d.type, FlowRole::Local);

    for (const auto& f : flows_)
      if (f.type.kind == Kind::Int && f.type.ranged)
        ranged_flows_.push_back(flow_id(f.name));

    // Definition sites.
    std::vector<Unit> units;
    std::vector<int> def_unit(flows_.size(), -1);
    auto claim = [&](int flow, int unit, const char* what) {
      auto& fi = flows_[static_cast<size_t>(flow)];
      if (fi.role == FlowRole::Input || fi.role == FlowRole::Controllable)
        throw ValidationError(n.name + ": " + fi.name + " is an input and cannot be defined");
      if (def_unit[static_cast<size_t>(flow)] != -1)
        throw ValidationError(n.name + ": flow " + fi.name + " defined more than once (" + what + ")");
      def_unit[static_cast<size_t>(flow)] = unit;
    };

    for (size_t i = 0; i < n.equations.size(); ++i) {
      const auto& [fname, e] = n.equations[i];
      int flow = require_flow(n, fname);
      Type t = infer_type(n, *e);
      check_assignable(n, flows_[static_cast<size_t>(flow)].type, t, fname);
      equations_.emplace_back(flow, compile_expr(*e));
      Unit u{PlanStep::K::Eq, static_cast<int>(equations_.size() - 1), {flow}, ref_ids(*e)};
      units.push_back(std::move(u));
      claim(flow, static_cast<int>(units.size() - 1), "equation");
      flows_[static_cast<size_t>(flow)].def = DefKind::Equation;
    }

    // Automata: state-equation units + fire units.
    for (size_t ai = 0; ai < n.automata.size(); ++ai) {
      const Automaton& aut = n.automata[ai];
      if (aut.modes.empty())
        throw ValidationError(n.name + ": automaton with no modes");
      if (aut.initial < 0 || aut.initial >= static_cast<int>(aut.modes.size()))
        throw ValidationError(n.name + ": automaton initial mode out of range");
      initial_modes_.push_back(aut.initial);
      CAutomaton ca;
      std::unordered_map<std::string, int> mode_ids;
      for (size_t m = 0; m < aut.modes.size(); ++m) {
        if (mode_ids.count(aut.modes[m].name))
          throw ValidationError(n.name + ": duplicate mode " + aut.modes[m].name);
        mode_ids.emplace(aut.modes[m].name, static_cast<int>(m));
      }

      // Which flows are governed by state equations of this automaton,
      // in first-appearance order (keeps the plan deterministic).
      std::vector<int> state_eq_flows;
      std::unordered_map<int, size_t> seen_count;
      for (const auto& m : aut.modes)
        for (const auto& [fname, e] : m.equations) {
          int flow = require_flow(n, fname);
          if (seen_count[flow]++ == 0) state_eq_flows.push_back(flow);
        }
      for (int flow : state_eq_flows)
        if (seen_count[flow] != aut.modes.size())
          throw ValidationError(n.name + ": flow " +
                                flows_[static_cast<size_t>(flow)].name +
                                " must have a state equation in every mode");
      // Re-walk modes in order so per_mode lines up with mode indices.
      for (int flow : state_eq_flows) {
        StateEqUnit u;
        u.automaton = static_cast<int>(ai);
        u.flow = flow;
        std::vector<int> deps;
        for (const auto& m : aut.modes) {
          const ExprPtr* found = nullptr;
          int count = 0;
          for (const auto& [fname, e] : m.equations)
            if (require_flow(n, fname) == flow) { found = &e; ++count; }
          if (count != 1)
            throw ValidationError(n.name + ": flow " +
                                  flows_[static_cast<size_t>(flow)].name +
                                  " defined " + std::to_string(count) +
                                  " times in mode " + m.name);
          Type t = infer_type(n, **found);
          check_assignable(n, flows_[static_cast<size_t>(flow)].type, t,
                           flows_[static_cast<size_t>(flow)].name);
          u.per_mode.push_back(compile_expr(**found));
          auto ids = ref_ids(**found);
          deps.insert(deps.end(), ids.begin(), ids.end());
        }
        state_eqs_.push_back(std::move(u));
        Unit unit{PlanStep::K::StateEq, static_cast<int>(state_eqs_.size() - 1), {flow}, deps};
        units.push_back(std::move(unit));
        claim(flow, static_cast<int>(units.size() - 1), "state equation");
        flows_[static_cast<size_t>(flow)].def = DefKind::StateEq;
        flows_[static_cast<size_t>(flow)].def_automaton = static_cast<int>(ai);
      }

      // Transitions, pulse set and the fire unit.
      std::vector<int> pulses;
      std::vector<int> fire_deps;
      for (const auto& m : aut.modes) {
        CMode cm;
        cm.name = m.name;
        for (const auto& t : m.transitions) {
          if (infer_type(n, *t.guard).kind != Kind::Bool)
            throw ValidationError(n.name + ": transition guard must be boolean");
          auto it = mode_ids.find(t.target);
          if (it == mode_ids.end())
            throw ValidationError(n.name + ": unknown target mode " + t.target);
          CTransition ct;
          ct.guard = compile_expr(*t.guard);
          ct.target = it->second;
          auto gids = ref_ids(*t.guard);
          fire_deps.insert(fire_deps.end(), gids.begin(), gids.end());
          for (const auto& [fname, e] : t.emissions) {
            int flow = require_flow(n, fname);
            if (flows_[static_cast<size_t>(flow)].type.kind != Kind::Bool)
              throw ValidationError(n.name + ": pulse flow " + fname + " must be boolean");
            if (infer_type(n, *e).kind != Kind::Bool)
              throw ValidationError(n.name + ": emission value for " + fname + " must be boolean");
            if (std::find(pulses.begin(), pulses.end(), flow) == pulses.end())
              pulses.push_back(flow);
            ct.emissions.emplace_back(flow, compile_expr(*e));
            auto eids = ref_ids(*e);
            fire_deps.insert(fire_deps.end(), eids.begin(), eids.end());
          }
          cm.transitions.push_back(std::move(ct));
        }
        ca.modes.push_back(std::move(cm));
      }
      ca.pulse_flows = pulses;
      automata_.push_back(std::move(ca));
      Unit unit{PlanStep::K::Fire, static_cast<int>(ai), pulses, fire_deps};
      units.push_back(std::move(unit));
      for (int pf : pulses) {
        claim(pf, static_cast<int>(units.size() - 1), "pulse emission");
        flows_[static_cast<size_t>(pf)].def = DefKind::Pulse;
        flows_[static_cast<size_t>(pf)].def_automaton = static_cast<int>(ai);
      }
    }

    // Completeness: every output and local has exactly one definition.
    for (const auto& fi : flows_) {
      if (fi.role == FlowRole::Output || fi.role == FlowRole::Local) {
        if (def_unit[static_cast<size_t>(flow_id(fi.name))] == -1)
          throw ValidationError(n.name + ": flow " + fi.name + " is never defined");
      }
    }

    topo_sort(n, units, def_unit);
    compute_state_determined(def_unit, units);
    compile_contract(n);
  }

  void check_enum_scope(const Node& n) const {
    std::unordered_map<std::string, std::string> owner;
    auto add = [&](const EnumTypePtr& e) {
      for (const auto& s : e->symbols) {
        auto [it, fresh] = owner.emplace(s, e->name);
        if (!fresh && it->second != e->name)
          throw ValidationError(n.name + ": enum symbol " + s +
                                " declared by both " + it->second + " and " + e->name);
      }
    };
    add(peid_type());
    for (const auto& e : n.enum_types)
      if (!same_enum(e, peid_type())) add(e);
  }

  int require_flow(const Node& n, const std::string& fname) const {
    auto it = flow_ids_.find(fname);
    if (it == flow_ids_.end())
      throw UnboundFlowError(n.name + "." + fname);
    return it->second;
  }

  static void check_assignable(const Node& n, const Type& declared, const Type& got,
                               const std::string& fname) {
    if (declared.kind != got.kind ||
        (declared.kind == Kind::Enum && !same_enum(declared.enum_type, got.enum_type)))
      throw TypeMismatchError(n.name + ": definition of " + fname +
                              " does not match its declared type");
  }

  Type infer_type(const Node& n, const Expr& e) const {
    switch (e.op) {
      case Op::Lit:
        switch (e.lit.kind) {
          case Kind::Bool: return Type::boolean();
          case Kind::Int: return Type::integer();
          case Kind::Enum: return Type::enumeration(e.lit.enum_type);
        }
        break;
      case Op::Ref: {
        auto it = flow_ids_.find(e.ref);
        if (it == flow_ids_.end()) throw UnboundFlowError(n.name + "." + e.ref);
        return flows_[static_cast<size_t>(it->second)].type;
      }
      case Op::Not:
        expect_bool(n, e.args[0]);
        return Type::boolean();
      case Op::And:
      case Op::Or:
      case Op::Implies:
        expect_bool(n, e.args[0]);
        expect_bool(n, e.args[1]);
        return Type::boolean();
      case Op::Eq: {
        Type a = infer_type(n, *e.args[0]);
        Type b = infer_type(n, *e.args[1]);
        if (a.kind != b.kind ||
            (a.kind == Kind::Enum && !same_enum(a.enum_type, b.enum_type)))
          throw TypeMismatchError(n.name + ": equality over differently typed operands");
        return Type::boolean();
      }
      case Op::Le:
        expect_int(n, e.args[0]);
        expect_int(n, e.args[1]);
        return Type::boolean();
      case Op::Add:
      case Op::Mul:
        expect_int(n, e.args[0]);
        expect_int(n, e.args[1]);
        return Type::integer();
      case Op::Ite: {
        expect_bool(n, e.args[0]);
        Type a = infer_type(n, *e.args[1]);
        Type b = infer_type(n, *e.args[2]);
        if (a.kind != b.kind ||
            (a.kind == Kind::Enum && !same_enum(a.enum_type, b.enum_type)))
          throw TypeMismatchError(n.name + ": conditional branches differ in type");
        if (a.kind == Kind::Int) return Type::integer();
        return a;
      }
    }
    throw TypeMismatchError(n.name + ": unknown expression");
  }

  void expect_bool(const Node& n, const ExprPtr& e) const {
    if (infer_type(n, *e).kind != Kind::Bool)
      throw TypeMismatchError(n.name + ": boolean operand expected");
  }
  void expect_int(const Node& n, const ExprPtr& e) const {
    if (infer_type(n, *e).kind != Kind::Int)
      throw TypeMismatchError(n.name + ": integer operand expected");
  }

  CExpr compile_expr(const Expr& e) const {
    CExpr c;
    c.op = e.op;
    if (e.op == Op::Lit) c.litv = e.lit.num;
    if (e.op == Op::Ref) c.flow = flow_ids_.at(e.ref);
    c.args.reserve(e.args.size());
    for (const auto& a : e.args) c.args.push_back(compile_expr(*a));
    return c;
  }

  std::vector<int> ref_ids(const Expr& e) const {
    std::vector<std::string> names;
    collect_refs(e, names);
    std::vector<int> ids;
    ids.reserve(names.size());
    for (const auto& nm : names) {
      auto it = flow_ids_.find(nm);
      if (it == flow_ids_.end()) throw UnboundFlowError(nm);
      ids.push_back(it->second);
    }
    return ids;
  }

  void topo_sort(const Node& n, const std::vector<Unit>& units,
                 const std::vector<int>& def_unit) {
    size_t count = units.size();
    std::vector<std::vector<int>> preds(count);
    for (size_t u = 0; u < count; ++u)
      for (int dep : units[u].deps) {
        int d = def_unit[static_cast<size_t>(dep)];
        if (d >= 0 && static_cast<size_t>(d) != u) preds[u].push_back(d);
      }
    std::vector<bool> emitted(count, false);
    plan_.clear();
    for (size_t produced = 0; produced < count;) {
      bool progress = false;
      for (size_t u = 0; u < count; ++u) {
        if (emitted[u]) continue;
        bool ready = true;
        for (int p : preds[u]) ready = ready && emitted[static_cast<size_t>(p)];
        if (!ready) continue;
        emitted[u] = true;
        plan_.push_back(PlanStep{units[u].kind, units[u].index});
        plan_defs_.push_back(units[u].defs);
        plan_deps_.push_back(units[u].deps);
        ++produced;
        progress = true;
      }
      if (!progress) {
        std::string cyc;
        for (size_t u = 0; u < count; ++u)
          if (!emitted[u] && !units[u].defs.empty())
            cyc += (cyc.empty() ? "" : ", ") +
                   flows_[static_cast<size_t>(units[u].defs[0])].name;
        throw InstantaneousCycleError(n.name + ": instantaneous dependency cycle through " + cyc);
      }
    }
  }

  void compute_state_determined(const std::vector<int>& def_unit,
                                const std::vector<Unit>& units) {
    // Inputs, controllables and pulses are not state-determined; an
    // equation or state-equation flow is iff all of its deps are.
    for (const auto& st : plan_) {
      if (st.kind == PlanStep::K::Fire) continue;
      int flow = st.kind == PlanStep::K::Eq
                     ? equations_[static_cast<size_t>(st.index)].first
                     : state_eqs_[static_cast<size_t>(st.index)].flow;
      const Unit& u = units[static_cast<size_t>(def_unit[static_cast<size_t>(flow)])];
      bool sd = true;
      for (int dep : u.deps) {
        const auto& fi = flows_[static_cast<size_t>(dep)];
        sd = sd && fi.state_determined;
      }
      flows_[static_cast<size_t>(flow)].state_determined = sd;
    }
  }

  void compile_contract(const Node& n) {
    if (!n.contract) {
      enforce_ = CExpr{};         // literal true
      enforce_.litv = 1;
      return;
    }
    const Contract& c = *n.contract;
    if (infer_type(n, *c.enforce).kind != Kind::Bool)
      throw ValidationError(n.name + ": enforce must be a boolean predicate");
    for (int id : ref_ids(*c.enforce))
      if (!flows_[static_cast<size_t>(id)].state_determined)
        throw ValidationError(n.name + ": enforce references non-state-determined flow " +
                              flows_[static_cast<size_t>(id)].name);
    enforce_ = compile_expr(*c.enforce);
    for (const auto& decl : c.controllables) {
      ExprPtr def = decl.default_expr;
      if (!def) {
        switch (decl.type.kind) {
          case Kind::Bool: def = lit_bool(false); break;
          case Kind::Int: def = lit_int(decl.type.ranged ? decl.type.lo : 0); break;
          case Kind::Enum: def = lit(Value::symbol(decl.type.enum_type, 0)); break;
        }
      }
      Type t = infer_type(n, *def);
      check_assignable(n, decl.type, t, decl.name);
      for (int id : ref_ids(*def))
        if (!flows_[static_cast<size_t>(id)].state_determined)
          throw ValidationError(n.name + ": controllable default for " + decl.name +
                                " references non-state-determined flow");
      ctrl_defaults_.push_back(compile_expr(*def));
    }
  }

  Node flat_;
  std::vector<FlowInfo> flows_;
  std::vector<int> initial_modes_;
  std::unordered_map<std::string, int> flow_ids_;
  std::vector<int> input_ids_, controllable_ids_, output_ids_, ranged_flows_;
  std::vector<std::pair<int, CExpr>> equations_;
  std::vector<StateEqUnit> state_eqs_;
  std::vector<CAutomaton> automata_;
  std::vector<PlanStep> plan_;
  std::vector<std::vector<int>> plan_defs_, plan_deps_;
  CExpr enforce_;
  std::vector<CExpr> ctrl_defaults_;
};

inline CompiledNode compile(const Node& node) { return CompiledNode(node); }

/// Initial memory of a validated node: every automaton in its first mode.
inline ProgramState node_reset(const Node& node) { return compile(node).reset(); }

/// Convenience one-shot step (compiles on each call; hold a CompiledNode
/// in loops).
inline StepResult node_step(const Node& node, const ProgramState& state,
                            const Valuation& inputs) {
  return compile(node).step(state, inputs);
}

}  // namespace synctl
