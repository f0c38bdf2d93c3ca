#pragma once

#include <memory>
#include <string>
#include <vector>

#include "synctl/value.hpp"

namespace synctl {

enum class Op : uint8_t {
  Lit, Ref, Not, And, Or, Implies, Eq, Le, Add, Mul, Ite
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree. Flows are referenced by name; compilation
/// resolves them to dense indices.
struct Expr {
  Op op;
  Value lit;                  // Op::Lit
  std::string ref;            // Op::Ref
  std::vector<ExprPtr> args;  // operands, in order

  static ExprPtr make(Op op, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->args = std::move(args);
    return e;
  }
};

inline ExprPtr lit(Value v) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Lit;
  e->lit = std::move(v);
  return e;
}
inline ExprPtr lit_bool(bool b) { return lit(Value::boolean(b)); }
inline ExprPtr lit_int(int64_t v) { return lit(Value::integer(v)); }
inline ExprPtr lit_sym(const EnumTypePtr& t, const std::string& s) {
  return lit(Value::symbol(t, s));
}
inline ExprPtr ref(std::string name) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Ref;
  e->ref = std::move(name);
  return e;
}
inline ExprPtr not_(ExprPtr a) { return Expr::make(Op::Not, {std::move(a)}); }
inline ExprPtr and_(ExprPtr a, ExprPtr b) {
  return Expr::make(Op::And, {std::move(a), std::move(b)});
}
inline ExprPtr or_(ExprPtr a, ExprPtr b) {
  return Expr::make(Op::Or, {std::move(a), std::move(b)});
}
inline ExprPtr implies(ExprPtr a, ExprPtr b) {
  return Expr::make(Op::Implies, {std::move(a), std::move(b)});
}
inline ExprPtr eq(ExprPtr a, ExprPtr b) {
  return Expr::make(Op::Eq, {std::move(a), std::move(b)});
}
inline ExprPtr le(ExprPtr a, ExprPtr b) {
  return Expr::make(Op::Le, {std::move(a), std::move(b)});
}
inline ExprPtr add(ExprPtr a, ExprPtr b) {
  return Expr::make(Op::Add, {std::move(a), std::move(b)});
}
inline ExprPtr mul(ExprPtr a, ExprPtr b) {
  return Expr::make(Op::Mul, {std::move(a), std::move(b)});
}
inline ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr f) {
  return Expr::make(Op::Ite, {std::move(c), std::move(t), std::move(f)});
}

/// Conjunction of a list; true when empty.
inline ExprPtr all_of(std::vector<ExprPtr> es) {
  if (es.empty()) return lit_bool(true);
  ExprPtr acc = es[0];
  for (size_t i = 1; i < es.size(); ++i) acc = and_(acc, es[i]);
  return acc;
}
/// Disjunction of a list; false when empty.
inline ExprPtr any_of(std::vector<ExprPtr> es) {
  if (es.empty()) return lit_bool(false);
  ExprPtr acc = es[0];
  for (size_t i = 1; i < es.size(); ++i) acc = or_(acc, es[i]);
  return acc;
}
/// Sum of a list; 0 when empty.
inline ExprPtr sum_of(std::vector<ExprPtr> es) {
  if (es.empty()) return lit_int(0);
  ExprPtr acc = es[0];
  for (size_t i = 1; i < es.size(); ++i) acc = add(acc, es[i]);
  return acc;
}

/// Total, deterministic evaluation against a name-keyed environment.
/// Throws UnboundFlowError / TypeMismatchError.
inline Value eval_expr(const Expr& e, const Valuation& env) {
  switch (e.op) {
    case Op::Lit: return e.lit;
    case Op::Ref: return lookup(env, e.ref);
    case Op::Not: return Value::boolean(!eval_expr(*e.args[0], env).as_bool());
    case Op::And: {
      bool a = eval_expr(*e.args[0], env).as_bool();
      bool b = eval_expr(*e.args[1], env).as_bool();
      return Value::boolean(a && b);
    }
    case Op::Or: {
      bool a = eval_expr(*e.args[0], env).as_bool();
      bool b = eval_expr(*e.args[1], env).as_bool();
      return Value::boolean(a || b);
    }
    case Op::Implies: {
      bool a = eval_expr(*e.args[0], env).as_bool();
      bool b = eval_expr(*e.args[1], env).as_bool();
      return Value::boolean(!a || b);
    }
    case Op::Eq: {
      Value a = eval_expr(*e.args[0], env);
      Value b = eval_expr(*e.args[1], env);
      if (a.kind != b.kind ||
          (a.kind == Kind::Enum && !same_enum(a.enum_type, b.enum_type)))
        throw TypeMismatchError("equality over differently typed operands");
      return Value::boolean(a.num == b.num);
    }
    case Op::Le:
      return Value::boolean(eval_expr(*e.args[0], env).as_int() <=
                            eval_expr(*e.args[1], env).as_int());
    case Op::Add:
      return Value::integer(eval_expr(*e.args[0], env).as_int() +
                            eval_expr(*e.args[1], env).as_int());
    case Op::Mul:
      return Value::integer(eval_expr(*e.args[0], env).as_int() *
                            eval_expr(*e.args[1], env).as_int());
    case Op::Ite: {
      bool c = eval_expr(*e.args[0], env).as_bool();
      return eval_expr(*e.args[c ? 1 : 2], env);
    }
  }
  throw TypeMismatchError("unknown operator");
}

inline Value eval_expr(const ExprPtr& e, const Valuation& env) {
  return eval_expr(*e, env);
}

/// Structural equality, used by the parse/pretty-print round trip.
inline bool expr_equal(const Expr& a, const Expr& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Lit:
      if (!(a.lit == b.lit)) return false;
      break;
    case Op::Ref:
      if (a.ref != b.ref) return false;
      break;
    default: break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!expr_equal(*a.args[i], *b.args[i])) return false;
  return true;
}
inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return expr_equal(*a, *b);
}

/// Collects the names referenced by an expression.
inline void collect_refs(const Expr& e, std::vector<std::string>& out) {
  if (e.op == Op::Ref) out.push_back(e.ref);
  for (const auto& a : e.args) collect_refs(*a, out);
}

}  // namespace synctl
