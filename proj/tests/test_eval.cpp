#include <doctest.h>

#include "sre/eval.hpp"
#include "sre/wimax.hpp"

using namespace sre;

namespace {
Value ev(const Term &t, const EvalEnv &env = {}) {
  EvalResult r = eval(t, env);
  REQUIRE_MESSAGE(r.ok(), r.error);
  return *r.value;
}
}  // namespace

TEST_CASE("exact rational arithmetic") {
  Term third = Term::number(Rational(1) / 3);
  Term sixth = Term::number(Rational(1) / 6);
  CHECK(ev(Term::add({third, sixth})) == Value::num(Rational(1) / 2));

  // n-ary subtraction and division fold left
  Term sub = Term::arith(ArithOp::Sub, {Term::number(10), Term::number(1), Term::number(2)});
  CHECK(ev(sub) == Value::num(7));
  Term div = Term::arith(ArithOp::Div, {Term::number(24), Term::number(2), Term::number(3)});
  CHECK(ev(div) == Value::num(4));

  // no floating-point drift on repeated tenth sums
  TermList tenths(10, Term::number(Rational(1) / 10));
  CHECK(ev(Term::add(tenths)) == Value::num(1));
}

TEST_CASE("division by zero is an error, not a value") {
  Term bad = Term::arith(ArithOp::Div, {Term::number(1), Term::number(0)});
  EvalResult r = eval(bad, {});
  CHECK_FALSE(r.ok());
  CHECK(r.error.find("zero") != std::string::npos);
}

TEST_CASE("logic operators") {
  Term t = Term::boolean(true), f = Term::boolean(false);
  CHECK(ev(Term::land({t, t, f})) == Value::boolean(false));
  CHECK(ev(Term::lor({f, f, t})) == Value::boolean(true));
  CHECK(ev(Term::lxor({t, t, t})) == Value::boolean(true));
  CHECK(ev(Term::lxor({t, t})) == Value::boolean(false));
  CHECK(ev(Term::lnot(f)) == Value::boolean(true));
  CHECK(ev(Term::logic(LogicOp::Nor, {f, f})) == Value::boolean(true));
  CHECK(ev(Term::logic(LogicOp::Nand, {t, t})) == Value::boolean(false));
}

TEST_CASE("comparisons over numbers, booleans, and atoms") {
  CHECK(ev(Term::cmp(CmpOp::Lt, Term::number(Rational(1) / 3), Term::number(Rational(1) / 2))) ==
        Value::boolean(true));
  CHECK(ev(Term::cmp(CmpOp::Eq, Term::boolean(true), Term::boolean(true))) ==
        Value::boolean(true));
  CHECK(ev(Term::cmp(CmpOp::Eq, Term::atom("A", "fam"), Term::atom("A", "fam"))) ==
        Value::boolean(true));
  CHECK(ev(Term::cmp(CmpOp::Ne, Term::atom("A", "fam"), Term::atom("B", "fam"))) ==
        Value::boolean(true));
}

TEST_CASE("IF evaluates only the selected branch") {
  Term poison = Term::arith(ArithOp::Div, {Term::number(1), Term::number(0)});
  Term t = Term::ite(Term::boolean(true), Term::number(5), poison);
  CHECK(ev(t) == Value::num(5));
}

TEST_CASE("tuples and indexing") {
  Term tup = Term::tuple({Term::number(10), Term::number(20), Term::number(30)});
  CHECK(ev(Term::index(tup, Term::number(1))) == Value::num(20));
  EvalResult out_of_range = eval(Term::index(tup, Term::number(9)), {});
  CHECK_FALSE(out_of_range.ok());
}

TEST_CASE("symbolic inputs and variable references resolve through the environment") {
  Assignment in;
  in["x"] = Value::num(4);
  std::map<std::pair<std::string, int>, Value> vars;
  vars[{"v", 1}] = Value::num(10);
  EvalEnv env;
  env.inputs = &in;
  env.vars = &vars;
  CHECK(ev(Term::add({Term::input("x"), Term::var("v", 1)}), env) == Value::num(14));

  EvalResult unbound = eval(Term::input("nope"), env);
  CHECK_FALSE(unbound.ok());
}

TEST_CASE("registered functions evaluate; unregistered ones fail") {
  EvalEnv env;
  env.funcs = &wimax_registry();
  Term word = Term::tuple({Term::boolean(true), Term::boolean(false)});
  EvalResult r = eval(Term::func("rand_fn", {word}), env);
  CHECK(r.ok());
  EvalResult missing = eval(Term::func("no_such_fn", {word}), env);
  CHECK_FALSE(missing.ok());
}

TEST_CASE("value/term conversion round-trips") {
  std::vector<Value> samples = {
      Value::boolean(true),
      Value::num(Rational(-7) / 3),
      Value::make_atom("INVALID_DATA"),
      Value::tuple({Value::num(1), Value::boolean(false)}),
  };
  for (const Value &v : samples) {
    Term t = value_to_term(v);
    CHECK(is_value_term(t));
    auto back = term_to_value(t);
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
  CHECK_FALSE(term_to_value(Term::input("x")).has_value());
  CHECK_FALSE(is_value_term(Term::add({Term::input("x"), Term::number(1)})));
}
