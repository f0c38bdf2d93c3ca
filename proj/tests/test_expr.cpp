#include <catch2/catch_amalgamated.hpp>

#include "synctl/expr.hpp"

using namespace synctl;

TEST_CASE("boolean operators evaluate over the environment") {
  Valuation env{{"x", Value::boolean(false)}};
  CHECK(eval_expr(and_(lit_bool(true), ref("x")), env) == Value::boolean(false));
  CHECK(eval_expr(or_(lit_bool(false), not_(ref("x"))), env) == Value::boolean(true));
  CHECK(eval_expr(implies(ref("x"), lit_bool(false)), env) == Value::boolean(true));
}

TEST_CASE("enum equality compares symbols of the same enumeration") {
  Valuation env{{"pos", Value::symbol(peid_type(), "pe1")}};
  CHECK(eval_expr(eq(ref("pos"), lit_sym(peid_type(), "pe2")), env) ==
        Value::boolean(false));
  CHECK(eval_expr(eq(ref("pos"), lit_sym(peid_type(), "pe1")), env) ==
        Value::boolean(true));
}

TEST_CASE("load arithmetic: 10*200 + 10*5 <= 3000") {
  Valuation env;
  auto e = le(add(mul(lit_int(10), lit_int(200)), mul(lit_int(10), lit_int(5))),
              lit_int(3000));
  CHECK(eval_expr(e, env) == Value::boolean(true));
}

TEST_CASE("unbound flows and type mismatches are reported") {
  Valuation env{{"b", Value::boolean(true)}};
  CHECK_THROWS_AS(eval_expr(ref("missing"), env), UnboundFlowError);
  CHECK_THROWS_AS(eval_expr(add(ref("b"), lit_int(1)), env), TypeMismatchError);
  CHECK_THROWS_AS(eval_expr(eq(ref("b"), lit_int(1)), env), TypeMismatchError);
}

TEST_CASE("integer arithmetic saturates instead of overflowing") {
  Valuation env;
  auto big = lit_int(kIntMax);
  CHECK(eval_expr(add(big, big), env).as_int() == kIntMax);
  CHECK(eval_expr(mul(big, lit_int(-2)), env).as_int() == kIntMin);
}

TEST_CASE("if-then-else selects by condition") {
  Valuation env{{"c", Value::boolean(true)}};
  CHECK(eval_expr(ite(ref("c"), lit_int(7), lit_int(9)), env).as_int() == 7);
  CHECK(eval_expr(ite(not_(ref("c")), lit_int(7), lit_int(9)), env).as_int() == 9);
}

TEST_CASE("evaluation is deterministic") {
  Valuation env{{"x", Value::boolean(true)}, {"n", Value::integer(21)}};
  auto e = ite(ref("x"), mul(ref("n"), lit_int(2)), lit_int(0));
  Value first = eval_expr(e, env);
  for (int i = 0; i < 100; ++i) CHECK(eval_expr(e, env) == first);
  CHECK(first.as_int() == 42);
}
