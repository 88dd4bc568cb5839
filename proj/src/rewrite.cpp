#include "sre/rewrite.hpp"

#include <algorithm>

namespace sre {

RewriteRule RewriteRule::syntactic(Term pattern, Term replacement, std::string name) {
  RewriteRule r;
  r.name = name.empty() ? to_string(pattern) + " => " + to_string(replacement) : std::move(name);
  r.pattern = std::move(pattern);
  r.replacement = std::move(replacement);
  return r;
}

RewriteRule RewriteRule::guarded(Term pattern, Term replacement,
                                 std::function<bool(const Bindings &)> guard,
                                 std::string name) {
  RewriteRule r = syntactic(std::move(pattern), std::move(replacement), std::move(name));
  r.guard = std::move(guard);
  return r;
}

RewriteRule RewriteRule::procedural(std::string name,
                                    std::function<std::optional<Term>(const Term &)> action) {
  RewriteRule r;
  r.name = std::move(name);
  r.action = std::move(action);
  return r;
}

RuleSet &RuleSet::concat(const RuleSet &other) {
  rules.insert(rules.end(), other.rules.begin(), other.rules.end());
  return *this;
}

namespace {

// One attempt of the rule at this node; pre-order traversal, each node tried
// once per pass, replacements not revisited within the pass.
Term rewrite_pass(const Term &t, const RewriteRule &rule, bool &changed) {
  if (rule.is_procedural()) {
    if (std::optional<Term> r = rule.action(t)) {
      if (!r->null() && !term_equal(*r, t)) {
        changed = true;
        return *r;
      }
    }
  } else {
    Bindings b;
    if (try_match(t, rule.pattern, b) && (!rule.guard || rule.guard(b))) {
      Term r = instantiate(rule.replacement, b);
      if (!r.null() && !term_equal(r, t)) {
        changed = true;
        return r;
      }
    }
  }
  if (t.arity() == 0) return t;
  TermList kids;
  kids.reserve(t.arity());
  bool kid_changed = false;
  for (const Term &k : t.kids()) {
    Term nk = rewrite_pass(k, rule, changed);
    if (!nk.same_node(k)) kid_changed = true;
    kids.push_back(std::move(nk));
  }
  if (!kid_changed) return t;
  return t.with_kids(std::move(kids));
}

}  // namespace

Term replace(const Term &expr, const RewriteRule &rule) {
  if (expr.null()) return expr;
  bool changed = false;
  return rewrite_pass(expr, rule, changed);
}

Term replace_list(const Term &expr, const RuleSet &rules) {
  Term cur = expr;
  for (const RewriteRule &r : rules.rules) cur = replace(cur, r);
  return cur;
}

NonTermination::NonTermination(Term prev, Term cur, std::string rs)
    : std::runtime_error("rule set '" + (rs.empty() ? std::string("<unnamed>") : rs) +
                         "' did not reach a fixpoint"),
      previous(std::move(prev)),
      last(std::move(cur)),
      ruleset(std::move(rs)) {}

Term replace_repeated(const Term &expr, const RuleSet &rules, int max_iterations) {
  Term cur = expr;
  Term prev;
  for (int i = 0; i < max_iterations; ++i) {
    Term next = replace_list(cur, rules);
    if (term_equal(next, cur)) return cur;
    prev = cur;
    cur = next;
  }
  throw NonTermination(prev, cur, rules.name);
}

// ---------------------------------------------------------------------------
// R_Math: polynomial normal form
// ---------------------------------------------------------------------------

namespace {

struct TermLessCmp {
  bool operator()(const Term &a, const Term &b) const { return term_compare(a, b) < 0; }
};

using Monomial = std::map<Term, int, TermLessCmp>;  // base -> exponent

struct MonoLess {
  bool operator()(const Monomial &a, const Monomial &b) const {
    auto ia = a.begin(), ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
      int c = term_compare(ia->first, ib->first);
      if (c != 0) return c < 0;
      if (ia->second != ib->second) return ia->second < ib->second;
    }
    return a.size() < b.size();
  }
};

using Poly = std::map<Monomial, Rational, MonoLess>;

constexpr size_t kPolyTermLimit = 4096;

void poly_add(Poly &p, const Monomial &m, const Rational &c) {
  if (c == 0) return;
  auto [it, fresh] = p.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

std::optional<Poly> poly_mul(const Poly &a, const Poly &b) {
  Poly out;
  for (const auto &[ma, ca] : a)
    for (const auto &[mb, cb] : b) {
      Monomial m = ma;
      for (const auto &[base, exp] : mb) m[base] += exp;
      poly_add(out, m, ca * cb);
      if (out.size() > kPolyTermLimit) return std::nullopt;
    }
  return out;
}

std::optional<Poly> to_poly(const Term &t) {
  if (t.is_num_const()) {
    Poly p;
    poly_add(p, Monomial{}, t.cval().q);
    return p;
  }
  if (t.is_bool_const()) return std::nullopt;  // ill-sorted; leave untouched
  if (t.kind() == Kind::Arith) {
    ArithOp op = t.arith_op();
    if (op == ArithOp::Add || op == ArithOp::Sub) {
      Poly acc;
      for (size_t i = 0; i < t.arity(); ++i) {
        auto p = to_poly(t.kid(i));
        if (!p) return std::nullopt;
        Rational sign = (op == ArithOp::Sub && i > 0) ? Rational(-1) : Rational(1);
        for (const auto &[m, c] : *p) {
          poly_add(acc, m, sign * c);
          if (acc.size() > kPolyTermLimit) return std::nullopt;
        }
      }
      return acc;
    }
    if (op == ArithOp::Mul) {
      Poly acc;
      poly_add(acc, Monomial{}, Rational(1));
      for (const Term &k : t.kids()) {
        auto p = to_poly(k);
        if (!p) return std::nullopt;
        auto prod = poly_mul(acc, *p);
        if (!prod) return std::nullopt;
        acc = std::move(*prod);
      }
      return acc;
    }
    // division: scale by constant divisors, otherwise the quotient itself is
    // an opaque base
    auto num = to_poly(t.kid(0));
    if (!num) return std::nullopt;
    Poly acc = std::move(*num);
    for (size_t i = 1; i < t.arity(); ++i) {
      auto d = to_poly(t.kid(i));
      if (!d) return std::nullopt;
      if (d->size() == 1 && d->begin()->first.empty()) {
        const Rational &c = d->begin()->second;
        if (c == 0) return std::nullopt;  // fold would hide a division by zero
        Poly scaled;
        for (const auto &[m, q] : acc) poly_add(scaled, m, q / c);
        acc = std::move(scaled);
      } else {
        Poly base;
        Monomial m;
        m[t] = 1;
        poly_add(base, m, Rational(1));
        return base;
      }
    }
    return acc;
  }
  Poly base;
  Monomial m;
  m[t] = 1;
  poly_add(base, m, Rational(1));
  return base;
}

Term poly_emit(const Poly &p) {
  if (p.empty()) return Term::number(0);
  TermList terms;
  terms.reserve(p.size());
  for (const auto &[mono, coef] : p) {
    TermList factors;
    if (!(coef == 1) || mono.empty()) factors.push_back(Term::number(coef));
    for (const auto &[base, exp] : mono)
      for (int e = 0; e < exp; ++e) factors.push_back(base);
    terms.push_back(Term::mul(std::move(factors)));
  }
  return Term::add(std::move(terms));
}

std::optional<Term> poly_normalize(const Term &t) {
  if (t.kind() != Kind::Arith) return std::nullopt;
  auto p = to_poly(t);
  if (!p) return std::nullopt;
  return poly_emit(*p);
}

// ---------------------------------------------------------------------------
// R_Logic: comparison canonicalization + boolean simplification
// ---------------------------------------------------------------------------

bool value_kind(const Term &t) {
  return t.kind() == Kind::Constant || t.kind() == Kind::Atom || t.kind() == Kind::Tuple;
}

std::optional<Term> compare_simplify(const Term &t) {
  if (t.kind() != Kind::Compare) return std::nullopt;
  const Term &a = t.kid(0);
  const Term &b = t.kid(1);
  CmpOp op = t.cmp_op();
  if (op == CmpOp::Gt) return Term::cmp(CmpOp::Lt, b, a);
  if (op == CmpOp::Ge) return Term::cmp(CmpOp::Le, b, a);
  if (term_equal(a, b)) {
    switch (op) {
      case CmpOp::Eq:
      case CmpOp::Le:
        return Term::boolean(true);
      case CmpOp::Ne:
      case CmpOp::Lt:
        return Term::boolean(false);
      default: break;
    }
  }
  bool is_eq = op == CmpOp::Eq || op == CmpOp::Ne;
  bool pol = op == CmpOp::Eq;  // folded truth of "equal" is pol, of Ne is !pol
  if (a.is_const() && b.is_const()) {
    const ConstVal &ca = a.cval();
    const ConstVal &cb = b.cval();
    if (is_eq) {
      bool eq = ca.is_bool == cb.is_bool && (ca.is_bool ? ca.b == cb.b : ca.q == cb.q);
      return Term::boolean(eq == pol);
    }
    if (!ca.is_bool && !cb.is_bool) {
      bool v = op == CmpOp::Lt ? ca.q < cb.q : ca.q <= cb.q;
      return Term::boolean(v);
    }
    return std::nullopt;
  }
  if (is_eq) {
    if (a.kind() == Kind::Atom && b.kind() == Kind::Atom)
      return Term::boolean((a.name() == b.name()) == pol);
    // value terms of different shapes are never equal
    if (value_kind(a) && value_kind(b) && a.kind() != b.kind())
      return Term::boolean(!pol);
    if (a.kind() == Kind::Tuple && b.kind() == Kind::Tuple && a.arity() != b.arity())
      return Term::boolean(!pol);
    // x = true -> x, x = false -> not x (and dually for /=)
    for (int side = 0; side < 2; ++side) {
      const Term &c = t.kid(static_cast<size_t>(side));
      const Term &x = t.kid(static_cast<size_t>(1 - side));
      if (!c.is_bool_const()) continue;
      if (value_kind(x)) continue;  // handled above or not foldable
      bool keep = c.cval().b == pol;
      return keep ? x : Term::lnot(x);
    }
    if (term_compare(a, b) > 0) return Term::cmp(op, b, a);
  }
  return std::nullopt;
}

Term negate_bool(const Term &x) {
  if (x.is_bool_const()) return Term::boolean(!x.cval().b);
  return Term::lnot(x);
}

std::optional<Term> bool_simplify(const Term &t) {
  if (t.kind() != Kind::Logic) return std::nullopt;
  LogicOp op = t.logic_op();
  switch (op) {
    case LogicOp::Not: {
      const Term &x = t.kid(0);
      if (x.is_bool_const()) return Term::boolean(!x.cval().b);
      if (x.kind() == Kind::Logic && x.logic_op() == LogicOp::Not) return x.kid(0);
      if (x.kind() == Kind::Compare) {
        CmpOp neg;
        switch (x.cmp_op()) {
          case CmpOp::Eq: neg = CmpOp::Ne; break;
          case CmpOp::Ne: neg = CmpOp::Eq; break;
          case CmpOp::Lt: neg = CmpOp::Ge; break;
          case CmpOp::Le: neg = CmpOp::Gt; break;
          case CmpOp::Gt: neg = CmpOp::Le; break;
          case CmpOp::Ge: neg = CmpOp::Lt; break;
          default: return std::nullopt;
        }
        return Term::cmp(neg, x.kid(0), x.kid(1));
      }
      return std::nullopt;
    }
    case LogicOp::And:
    case LogicOp::Or: {
      bool absorbing = op == LogicOp::Or;  // true absorbs or, false absorbs and
      TermList kept;
      kept.reserve(t.arity());
      for (const Term &k : t.kids()) {
        if (k.is_bool_const()) {
          if (k.cval().b == absorbing) return Term::boolean(absorbing);
          continue;  // identity element
        }
        if (!kept.empty() && term_equal(kept.back(), k)) continue;  // idempotence
        kept.push_back(k);
      }
      for (const Term &k : kept)
        if (k.kind() == Kind::Logic && k.logic_op() == LogicOp::Not)
          for (const Term &other : kept)
            if (term_equal(k.kid(0), other)) return Term::boolean(absorbing);
      return Term::logic(op, std::move(kept));
    }
    case LogicOp::Xor: {
      bool parity = false;
      TermList kept;
      kept.reserve(t.arity());
      for (const Term &k : t.kids()) {
        if (k.is_bool_const()) {
          parity ^= k.cval().b;
          continue;
        }
        // canonical operand order makes equal operands adjacent
        if (!kept.empty() && term_equal(kept.back(), k))
          kept.pop_back();  // a xor a cancels
        else
          kept.push_back(k);
      }
      Term core = Term::lxor(std::move(kept));
      return parity ? negate_bool(core) : core;
    }
    case LogicOp::Nor:
      // expand into the negated or/and basis; the and/or cases then own all
      // further simplification (constant folding, idempotence, complements)
      return Term::lnot(Term::lor(t.kids()));
    case LogicOp::Nand:
      return Term::lnot(Term::land(t.kids()));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// R_IF: distribution (restricted) then reduction with condition dominance
// ---------------------------------------------------------------------------

std::optional<Term> if_distribute(const Term &t) {
  Kind k = t.kind();
  if (k != Kind::FuncApp && k != Kind::Index && k != Kind::Compare && k != Kind::Logic &&
      k != Kind::Arith)
    return std::nullopt;
  size_t pos = t.arity();
  for (size_t i = 0; i < t.arity(); ++i)
    if (t.kid(i).kind() == Kind::If) {
      pos = i;
      break;
    }
  if (pos == t.arity()) return std::nullopt;
  // hoist only when every sibling is ground: duplication then shares
  // immutable structure and cannot grow the term unboundedly
  for (size_t i = 0; i < t.arity(); ++i)
    if (i != pos && !t.kid(i).ground()) return std::nullopt;
  const Term &branch = t.kid(pos);
  TermList then_kids(t.kids());
  TermList else_kids(t.kids());
  then_kids[pos] = branch.kid(1);
  else_kids[pos] = branch.kid(2);
  return Term::ite(branch.kid(0), t.with_kids(std::move(then_kids)),
                   t.with_kids(std::move(else_kids)));
}

Term subst_cond(const Term &t, const Term &cond, bool take_then) {
  if (t.kind() == Kind::If && term_equal(t.kid(0), cond))
    return subst_cond(t.kid(take_then ? 1 : 2), cond, take_then);
  if (t.arity() == 0) return t;
  TermList kids;
  kids.reserve(t.arity());
  bool changed = false;
  for (const Term &k : t.kids()) {
    Term nk = subst_cond(k, cond, take_then);
    if (!nk.same_node(k)) changed = true;
    kids.push_back(std::move(nk));
  }
  if (!changed) return t;
  return t.with_kids(std::move(kids));
}

std::optional<Term> if_reduce(const Term &t) {
  if (t.kind() != Kind::If) return std::nullopt;
  const Term &c = t.kid(0);
  const Term &a = t.kid(1);
  const Term &b = t.kid(2);
  if (c.is_true()) return a;
  if (c.is_false()) return b;
  if (term_equal(a, b)) return a;
  if (a.is_true() && b.is_false()) return c;
  if (a.is_false() && b.is_true()) return Term::lnot(c);
  if (c.kind() == Kind::Logic && c.logic_op() == LogicOp::Not)
    return Term::ite(c.kid(0), b, a);
  Term a2 = subst_cond(a, c, true);
  Term b2 = subst_cond(b, c, false);
  if (!a2.same_node(a) || !b2.same_node(b)) return Term::ite(c, a2, b2);
  return std::nullopt;
}

}  // namespace

RuleSet builtin_ruleset(const std::string &name) {
  RuleSet rs(name);
  if (name == "R_Math") {
    rs.add(RewriteRule::procedural("poly_normalize", poly_normalize));
  } else if (name == "R_Logic") {
    rs.add(RewriteRule::procedural("compare_simplify", compare_simplify));
    rs.add(RewriteRule::procedural("bool_simplify", bool_simplify));
  } else if (name == "R_IF") {
    rs.add(RewriteRule::procedural("if_distribute", if_distribute));
    rs.add(RewriteRule::procedural("if_reduce", if_reduce));
  } else {
    throw std::invalid_argument("unknown built-in rule set: " + name);
  }
  return rs;
}

RuleSet data_rules(const FuncRegistry *registry) {
  RuleSet rs("R_Data");
  rs.add(RewriteRule::procedural("index_fold", [](const Term &t) -> std::optional<Term> {
    if (t.kind() != Kind::Index) return std::nullopt;
    const Term &base = t.kid(0);
    const Term &idx = t.kid(1);
    if (base.is_atom("INVALID_DATA")) return base;
    if (base.kind() != Kind::Tuple || !idx.is_num_const()) return std::nullopt;
    const Rational &q = idx.cval().q;
    if (boost::multiprecision::denominator(q) != 1) return std::nullopt;
    if (q < 0 || q >= Rational(static_cast<long>(base.arity()))) return std::nullopt;
    return base.kid(static_cast<size_t>(boost::multiprecision::numerator(q)));
  }));
  rs.add(RewriteRule::procedural(
      "invalid_prop", [registry](const Term &t) -> std::optional<Term> {
        if (t.kind() != Kind::FuncApp || !registry || !registry->find(t.name()))
          return std::nullopt;
        for (const Term &k : t.kids())
          if (k.is_atom("INVALID_DATA")) return k;
        return std::nullopt;
      }));
  rs.add(RewriteRule::procedural("func_eval", [registry](const Term &t) -> std::optional<Term> {
    if (t.kind() != Kind::FuncApp || !registry) return std::nullopt;
    const FuncDef *def = registry->find(t.name());
    if (!def || !def->numeric) return std::nullopt;
    std::vector<Value> args;
    args.reserve(t.arity());
    for (const Term &k : t.kids()) {
      auto v = term_to_value(k);
      if (!v) return std::nullopt;
      args.push_back(std::move(*v));
    }
    auto r = def->numeric(args);
    if (!r) return std::nullopt;
    return value_to_term(*r);
  }));
  rs.add(RewriteRule::procedural(
      "func_expand", [registry](const Term &t) -> std::optional<Term> {
        if (t.kind() != Kind::FuncApp || !registry) return std::nullopt;
        const FuncDef *def = registry->find(t.name());
        if (!def || !def->symbolic) return std::nullopt;
        return def->symbolic(t.kids());
      }));
  rs.add(RewriteRule::procedural("tuple_eq_expand", [](const Term &t) -> std::optional<Term> {
    if (t.kind() != Kind::Compare) return std::nullopt;
    CmpOp op = t.cmp_op();
    if (op != CmpOp::Eq && op != CmpOp::Ne) return std::nullopt;
    const Term &a = t.kid(0);
    const Term &b = t.kid(1);
    if (a.kind() != Kind::Tuple || b.kind() != Kind::Tuple || a.arity() != b.arity())
      return std::nullopt;
    TermList parts;
    parts.reserve(a.arity());
    for (size_t i = 0; i < a.arity(); ++i) parts.push_back(Term::cmp(op, a.kid(i), b.kid(i)));
    return op == CmpOp::Eq ? Term::land(std::move(parts)) : Term::lor(std::move(parts));
  }));
  return rs;
}

RuleSet default_simplifier(const FuncRegistry *registry) {
  RuleSet rs("default");
  rs.concat(data_rules(registry));
  rs.concat(builtin_ruleset("R_IF"));
  rs.concat(builtin_ruleset("R_Logic"));
  rs.concat(builtin_ruleset("R_Math"));
  return rs;
}

RuleSet conversion_elimination(const std::vector<std::string> &conv_funcs) {
  RuleSet rs("R_Abst");
  for (const std::string &f : conv_funcs)
    rs.add(RewriteRule::syntactic(Term::func(f, {Term::hole("x")}), Term::hole("x"),
                                  "elim_" + f));
  return rs;
}

Abstraction make_abstraction(std::map<std::string, std::string> rename, RuleSet term_rules) {
  Abstraction a;
  a.rename = std::move(rename);
  a.term_rules = std::move(term_rules);
  return a;
}

}  // namespace sre
