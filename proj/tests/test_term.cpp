#include <doctest.h>

#include "sre/term.hpp"

using namespace sre;

TEST_CASE("commutative operators flatten and sort at construction") {
  Term a = Term::input("a"), b = Term::input("b"), c = Term::input("c");

  Term nested = Term::add({Term::add({a, b}), c});
  CHECK(nested.kind() == Kind::Arith);
  CHECK(nested.arity() == 3);

  CHECK(term_equal(Term::add({a, b, c}), Term::add({c, b, a})));
  CHECK(term_equal(Term::mul({a, b}), Term::mul({b, a})));
  CHECK(term_equal(Term::land({a, b}), Term::land({b, a})));
  CHECK(term_equal(Term::lor({a, b}), Term::lor({b, a})));
  CHECK(term_equal(Term::lxor({Term::lxor({a, b}), c}), Term::lxor({a, b, c})));
}

TEST_CASE("non-commutative operators preserve operand order") {
  Term a = Term::input("a"), b = Term::input("b");
  CHECK_FALSE(term_equal(Term::arith(ArithOp::Sub, {a, b}), Term::arith(ArithOp::Sub, {b, a})));
  CHECK_FALSE(term_equal(Term::cmp(CmpOp::Lt, a, b), Term::cmp(CmpOp::Lt, b, a)));
  CHECK_FALSE(term_equal(Term::tuple({a, b}), Term::tuple({b, a})));
  Term cond = Term::input("c");
  CHECK_FALSE(term_equal(Term::ite(cond, a, b), Term::ite(cond, b, a)));
}

TEST_CASE("equal terms share hash; compare is a total order") {
  Term a = Term::add({Term::input("x"), Term::number(1)});
  Term b = Term::add({Term::number(1), Term::input("x")});
  CHECK(term_equal(a, b));
  CHECK(a.hash() == b.hash());
  CHECK(term_compare(a, b) == 0);

  // category order: constants < atoms < symbolic inputs < variable refs < compound
  Term k = Term::number(3);
  Term at = Term::atom("INVALID_DATA");
  Term s = Term::input("x");
  Term v = Term::var("x", 0);
  Term f = Term::func("f", {k});
  CHECK(term_compare(k, at) < 0);
  CHECK(term_compare(at, s) < 0);
  CHECK(term_compare(s, v) < 0);
  CHECK(term_compare(v, f) < 0);
  CHECK(term_compare(at, k) > 0);
  CHECK(term_less(k, f));
}

TEST_CASE("ground and node-count bookkeeping") {
  CHECK(Term::boolean(true).ground());
  CHECK(Term::atom("A").ground());
  CHECK_FALSE(Term::input("x").ground());
  CHECK_FALSE(Term::var("v", 1).ground());
  CHECK_FALSE(Term::hole("h").ground());
  CHECK(Term::hole("h").with_hole());

  Term x = Term::input("x");
  Term shared = Term::add({Term::mul({x, x}), x});
  CHECK(unique_node_count(shared) <= shared.node_count());
}

TEST_CASE("with_kids preserves payload and sharing") {
  Term f = Term::func("f", {Term::number(1), Term::number(2)});
  Term same = f.with_kids({f.kid(0), f.kid(1)});
  CHECK(same.same_node(f));
  Term changed = f.with_kids({f.kid(0), Term::number(3)});
  CHECK(changed.name() == "f");
  CHECK(changed.arity() == 2);
  CHECK_FALSE(term_equal(changed, f));
}

TEST_CASE("rendering matches the surface syntax") {
  Term t = Term::ite(Term::input("c"), Term::number(1), Term::number(2));
  CHECK(to_string(t) == "IF(c, 1, 2)");
  CHECK(to_string(Term::number(Rational(3) / 4)) == "3/4");
  CHECK(to_string(Term::var("x", 1)) == "x(n-1)");
  CHECK(to_string(Term::var("x", 0)) == "x(n)");
  PrintOpts bare;
  bare.bare_time_zero = true;
  CHECK(to_string(Term::var("x", 0), bare) == "x");
  CHECK(to_string(Term::index(Term::var("v", 0), Term::number(2)), bare) == "v[2]");
}

TEST_CASE("subterm_at follows child paths") {
  Term t = Term::ite(Term::input("c"), Term::func("f", {Term::number(7)}), Term::number(2));
  auto sub = subterm_at(t, {1, 0});
  REQUIRE(sub.has_value());
  CHECK(term_equal(*sub, Term::number(7)));
  CHECK_FALSE(subterm_at(t, {5}).has_value());
}
