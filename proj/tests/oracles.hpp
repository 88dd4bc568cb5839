#pragma once
// Shared test instruments, deliberately independent of the engine internals:
//   - a self-contained reference evaluator over scalar terms (its own
//     recursion, not the library evaluator), used to decide whether a
//     rewrite preserved a term's value;
//   - a seeded generator of random well-sorted scalar terms;
//   - a seeded generator of random source units for round-trip checks.

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sre/dsl.hpp"
#include "sre/term.hpp"

namespace oracles {

using sre::ArithOp;
using sre::CmpOp;
using sre::Kind;
using sre::LogicOp;
using sre::Rational;
using sre::Term;
using sre::TermList;

// ---------------------------------------------------------------------------
// reference evaluator
// ---------------------------------------------------------------------------

struct OValue {
  bool is_bool = false;
  bool b = false;
  Rational q;

  static OValue boolean(bool v) { OValue x; x.is_bool = true; x.b = v; return x; }
  static OValue num(Rational v) { OValue x; x.q = std::move(v); return x; }
  bool operator==(const OValue &o) const {
    if (is_bool != o.is_bool) return false;
    return is_bool ? b == o.b : q == o.q;
  }
};

using OEnv = std::map<std::string, OValue>;

// Total on scalar bool/num terms whose symbols are all bound and whose
// divisions have nonzero divisors; nullopt otherwise.
inline std::optional<OValue> oeval(const Term &t, const OEnv &env) {
  switch (t.kind()) {
    case Kind::Constant:
      return t.cval().is_bool ? OValue::boolean(t.cval().b) : OValue::num(t.cval().q);
    case Kind::SymInput: {
      auto it = env.find(t.name());
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case Kind::Logic: {
      LogicOp op = t.logic_op();
      std::vector<bool> vs;
      for (const Term &k : t.kids()) {
        auto v = oeval(k, env);
        if (!v || !v->is_bool) return std::nullopt;
        vs.push_back(v->b);
      }
      switch (op) {
        case LogicOp::Not: return vs.size() == 1 ? std::optional(OValue::boolean(!vs[0])) : std::nullopt;
        case LogicOp::And: {
          bool r = true;
          for (bool v : vs) r = r && v;
          return OValue::boolean(r);
        }
        case LogicOp::Or: {
          bool r = false;
          for (bool v : vs) r = r || v;
          return OValue::boolean(r);
        }
        case LogicOp::Xor: {
          bool r = false;
          for (bool v : vs) r = r != v;
          return OValue::boolean(r);
        }
        case LogicOp::Nor: {
          bool r = false;
          for (bool v : vs) r = r || v;
          return OValue::boolean(!r);
        }
        case LogicOp::Nand: {
          bool r = true;
          for (bool v : vs) r = r && v;
          return OValue::boolean(!r);
        }
      }
      return std::nullopt;
    }
    case Kind::Compare: {
      auto a = oeval(t.kid(0), env), b = oeval(t.kid(1), env);
      if (!a || !b) return std::nullopt;
      if (a->is_bool != b->is_bool) return std::nullopt;
      if (a->is_bool) {
        switch (t.cmp_op()) {
          case CmpOp::Eq: return OValue::boolean(a->b == b->b);
          case CmpOp::Ne: return OValue::boolean(a->b != b->b);
          default: return std::nullopt;
        }
      }
      switch (t.cmp_op()) {
        case CmpOp::Eq: return OValue::boolean(a->q == b->q);
        case CmpOp::Ne: return OValue::boolean(a->q != b->q);
        case CmpOp::Lt: return OValue::boolean(a->q < b->q);
        case CmpOp::Le: return OValue::boolean(a->q <= b->q);
        case CmpOp::Gt: return OValue::boolean(a->q > b->q);
        case CmpOp::Ge: return OValue::boolean(a->q >= b->q);
      }
      return std::nullopt;
    }
    case Kind::Arith: {
      std::vector<Rational> vs;
      for (const Term &k : t.kids()) {
        auto v = oeval(k, env);
        if (!v || v->is_bool) return std::nullopt;
        vs.push_back(v->q);
      }
      if (vs.empty()) return std::nullopt;
      Rational r;
      switch (t.arith_op()) {
        case ArithOp::Add:
          r = 0;
          for (const Rational &v : vs) r += v;
          break;
        case ArithOp::Mul:
          r = 1;
          for (const Rational &v : vs) r *= v;
          break;
        case ArithOp::Sub:
          r = vs[0];
          for (size_t i = 1; i < vs.size(); ++i) r -= vs[i];
          break;
        case ArithOp::Div:
          r = vs[0];
          for (size_t i = 1; i < vs.size(); ++i) {
            if (vs[i] == 0) return std::nullopt;
            r /= vs[i];
          }
          break;
      }
      return OValue::num(r);
    }
    case Kind::If: {
      auto c = oeval(t.kid(0), env);
      if (!c || !c->is_bool) return std::nullopt;
      return oeval(c->b ? t.kid(1) : t.kid(2), env);
    }
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// random well-sorted scalar terms
// ---------------------------------------------------------------------------

// The soundness corpus's shape bounds: depth at most 5, at most 4 boolean
// and 3 numeric symbols per term.
inline const std::vector<std::string> &bool_syms() {
  static const std::vector<std::string> s{"p0", "p1", "p2", "p3"};
  return s;
}
inline const std::vector<std::string> &num_syms() {
  static const std::vector<std::string> s{"x0", "x1", "x2"};
  return s;
}

class TermGen {
 public:
  explicit TermGen(uint64_t seed) : rng_(seed) {}

  Term gen(int depth = 5) { return flip() ? gen_bool(depth) : gen_num(depth); }

  Term gen_bool(int depth) {
    if (depth <= 0) return leaf_bool();
    switch (pick(8)) {
      case 0: return leaf_bool();
      case 1: return Term::lnot(gen_bool(depth - 1));
      case 2: return Term::land(kids_bool(depth));
      case 3: return Term::lor(kids_bool(depth));
      case 4: return Term::lxor(kids_bool(depth));
      case 5:
        return Term::logic(pick(2) ? LogicOp::Nor : LogicOp::Nand,
                           {gen_bool(depth - 1), gen_bool(depth - 1)});
      case 6: {
        CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
        return Term::cmp(ops[pick(6)], gen_num(depth - 1), gen_num(depth - 1));
      }
      default:
        return Term::ite(gen_bool(depth - 1), gen_bool(depth - 1), gen_bool(depth - 1));
    }
  }

  Term gen_num(int depth) {
    if (depth <= 0) return leaf_num();
    switch (pick(7)) {
      case 0: return leaf_num();
      case 1: return Term::add(kids_num(depth));
      case 2: return Term::mul(kids_num(depth));
      case 3: return Term::arith(ArithOp::Sub, kids_num(depth));
      case 4:
        // nonzero-constant divisors keep the corpus total (no division by
        // zero on any sample point)
        return Term::arith(ArithOp::Div, {gen_num(depth - 1), nonzero_const()});
      default:
        return Term::ite(gen_bool(depth - 1), gen_num(depth - 1), gen_num(depth - 1));
    }
  }

  // sample environment binding every symbol the corpus can mention
  OEnv sample_env() {
    OEnv env;
    for (const std::string &p : bool_syms()) env[p] = OValue::boolean(flip());
    for (const std::string &x : num_syms()) env[x] = OValue::num(random_rational());
    return env;
  }

  Rational random_rational() {
    long num = static_cast<long>(pick(13)) - 6;
    long den = 1 + static_cast<long>(pick(4));
    return Rational(num) / den;
  }

  std::mt19937_64 &rng() { return rng_; }

 private:
  std::mt19937_64 rng_;

  size_t pick(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng_); }
  bool flip() { return pick(2) == 0; }

  Term leaf_bool() {
    if (pick(4) == 0) return Term::boolean(flip());
    return Term::input(bool_syms()[pick(bool_syms().size())]);
  }
  Term leaf_num() {
    if (pick(3) == 0) return Term::number(random_rational());
    return Term::input(num_syms()[pick(num_syms().size())]);
  }
  Term nonzero_const() {
    Rational q = random_rational();
    if (q == 0) q = 1;
    return Term::number(q);
  }
  TermList kids_bool(int depth) {
    TermList ks;
    size_t n = 2 + pick(2);
    for (size_t i = 0; i < n; ++i) ks.push_back(gen_bool(depth - 1));
    return ks;
  }
  TermList kids_num(int depth) {
    TermList ks;
    size_t n = 2 + pick(2);
    for (size_t i = 0; i < n; ++i) ks.push_back(gen_num(depth - 1));
    return ks;
  }
};

// Exhaustive boolean assignments over the symbols actually used, crossed
// with `points` random numeric environments; true iff the reference
// evaluator gives the same defined value for `a` and `b` everywhere.
inline bool same_value(const Term &a, const Term &b, TermGen &gen, int points,
                       std::string *why = nullptr) {
  std::set<std::string> bools;
  std::vector<std::string> nums = num_syms();
  auto collect = [&](const Term &t, auto &&self) -> void {
    if (t.kind() == Kind::SymInput && t.name()[0] == 'p') bools.insert(t.name());
    for (const Term &k : t.kids()) self(k, self);
  };
  collect(a, collect);
  collect(b, collect);
  std::vector<std::string> bs(bools.begin(), bools.end());

  for (int pt = 0; pt < points; ++pt) {
    OEnv base;
    for (const std::string &x : nums) base[x] = OValue::num(gen.random_rational());
    for (uint64_t mask = 0; mask < (uint64_t{1} << bs.size()); ++mask) {
      OEnv env = base;
      for (size_t i = 0; i < bs.size(); ++i)
        env[bs[i]] = OValue::boolean((mask >> i) & 1);
      auto va = oeval(a, env), vb = oeval(b, env);
      if (!va.has_value() || !vb.has_value() || !(*va == *vb)) {
        if (why) {
          *why = "mismatch at point " + std::to_string(pt) + " mask " +
                 std::to_string(mask) + ": " + sre::to_string(a) + "  vs  " +
                 sre::to_string(b);
        }
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// random source units
// ---------------------------------------------------------------------------

class UnitGen {
 public:
  explicit UnitGen(uint64_t seed) : rng_(seed) {}

  sre::SourceUnit gen() {
    sre::SourceUnit u;
    atoms_.clear();
    enum_of_.clear();
    size_t n_enums = pick(3);
    for (size_t i = 0; i < n_enums; ++i) {
      sre::EnumDecl e;
      e.family = "fam" + std::to_string(i);
      size_t m = 2 + pick(3);
      for (size_t j = 0; j < m; ++j) {
        std::string name = "E" + std::to_string(i) + "_" + std::to_string(j);
        e.members.push_back(name);
        atoms_.push_back(name);
        enum_of_[name] = e.family;
      }
      u.enums.push_back(std::move(e));
    }
    size_t n_consts = pick(3);
    for (size_t i = 0; i < n_consts; ++i) {
      std::string name = "K" + std::to_string(i);
      u.consts.push_back(name);
      atoms_.push_back(name);
      enum_of_[name] = "";
    }
    size_t n_sc = pick(3);
    for (size_t i = 0; i < n_sc; ++i) u.scenarios.push_back(gen_scenario(i));
    size_t n_sys = pick(3);
    for (size_t i = 0; i < n_sys; ++i) u.systems.push_back(gen_system(i));
    size_t n_rs = pick(2);
    for (size_t i = 0; i < n_rs; ++i) u.rulesets.push_back(gen_ruleset(i));
    size_t n_prop = pick(3);
    for (size_t i = 0; i < n_prop; ++i) u.properties.push_back(gen_property(i));
    size_t n_jobs = pick(2);
    for (size_t i = 0; i < n_jobs; ++i) u.jobs.push_back(gen_job(i));
    if (u.empty()) u.consts.push_back("K_ONLY");
    return u;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> atoms_;
  std::map<std::string, std::string> enum_of_;

  size_t pick(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng_); }
  bool flip() { return pick(2) == 0; }
  long small_int() { return static_cast<long>(pick(21)) - 10; }

  Term atom_term() {
    const std::string &a = atoms_[pick(atoms_.size())];
    return Term::atom(a, enum_of_.at(a));
  }

  Term const_term() {
    switch (pick(4)) {
      case 0: return Term::boolean(flip());
      case 1: return Term::number(small_int());
      case 2: {
        long den = 2 + static_cast<long>(pick(5));
        return Term::number(Rational(small_int()) / den);
      }
      default:
        if (!atoms_.empty()) return atom_term();
        return Term::number(small_int());
    }
  }

  // equation-context term over the given leaf names (symbolic inputs) and
  // variable references
  Term eq_term(int depth, const std::vector<std::string> &ins,
               const std::vector<std::string> &vars) {
    if (depth <= 0 || pick(4) == 0) {
      switch (pick(4)) {
        case 0: return const_term();
        case 1:
          if (!ins.empty()) return Term::input(ins[pick(ins.size())]);
          return const_term();
        case 2:
          if (!vars.empty())
            return Term::var(vars[pick(vars.size())], static_cast<int>(pick(3)));
          return const_term();
        default: return const_term();
      }
    }
    switch (pick(8)) {
      case 0: return Term::add({eq_term(depth - 1, ins, vars), eq_term(depth - 1, ins, vars)});
      case 1:
        return Term::arith(ArithOp::Sub,
                           {eq_term(depth - 1, ins, vars), eq_term(depth - 1, ins, vars)});
      case 2: return Term::land({eq_term(depth - 1, ins, vars), eq_term(depth - 1, ins, vars)});
      case 3: {
        CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Ge};
        return Term::cmp(ops[pick(4)], eq_term(depth - 1, ins, vars),
                         eq_term(depth - 1, ins, vars));
      }
      case 4:
        return Term::ite(eq_term(depth - 1, ins, vars), eq_term(depth - 1, ins, vars),
                         eq_term(depth - 1, ins, vars));
      case 5: {
        TermList elems;
        size_t n = pick(3);
        for (size_t i = 0; i < n; ++i) elems.push_back(eq_term(depth - 1, ins, vars));
        return Term::tuple(std::move(elems));
      }
      case 6: {
        TermList args;
        size_t n = 1 + pick(2);
        for (size_t i = 0; i < n; ++i) args.push_back(eq_term(depth - 1, ins, vars));
        return Term::func("f" + std::to_string(pick(3)), std::move(args));
      }
      default:
        return Term::index(eq_term(depth - 1, ins, vars),
                           Term::number(static_cast<long>(pick(4))));
    }
  }

  sre::Scenario gen_scenario(size_t i) {
    sre::Scenario sc;
    sc.name = "sc" + std::to_string(i);
    size_t nb = 1 + pick(3);
    for (size_t j = 0; j < nb; ++j)
      sc.bindings["ctl" + std::to_string(j)] = const_term();
    size_t na = pick(3);
    for (size_t j = 0; j < na; ++j) sc.attrs["attr" + std::to_string(j)] = small_int();
    return sc;
  }

  sre::Sort random_sort() {
    switch (pick(6)) {
      case 0: return sre::Sort::boolean();
      case 1: return sre::Sort::num();
      case 2: return sre::Sort::num(sre::NumDomain::Nat);
      case 3: return sre::Sort::word();
      case 4: return sre::Sort::word(2 + static_cast<int>(pick(7)));
      default: return sre::Sort::any();
    }
  }

  sre::SreSystem gen_system(size_t i) {
    sre::SreSystem sys;
    sys.name = "sys" + std::to_string(i);
    size_t na = pick(2);
    for (size_t j = 0; j < na; ++j) sys.attrs["width" + std::to_string(j)] = 1 + pick(8);
    size_t nin = 1 + pick(2);
    for (size_t j = 0; j < nin; ++j) {
      std::string name = "in" + std::to_string(j);
      sys.inputs.push_back(name);
      sys.sorts[name] = random_sort();
    }
    if (flip()) {
      sys.controls.push_back("ctl0");
      sys.sorts["ctl0"] =
          !enum_of_.empty() && flip()
              ? sre::Sort::enum_family(enum_of_.begin()->second.empty()
                                           ? std::string("fam0")
                                           : enum_of_.begin()->second)
              : sre::Sort::boolean();
    }
    // enum sort families must exist among the declared enums to parse back
    // identically; fall back to bool when there are none
    if (!sys.controls.empty() && sys.sorts["ctl0"].kind == sre::Sort::Kind::Enum) {
      bool found = false;
      for (const auto &[a, fam] : enum_of_) found = found || fam == sys.sorts["ctl0"].family;
      if (!found) sys.sorts["ctl0"] = sre::Sort::boolean();
    }
    size_t nv = 1 + pick(3);
    std::vector<std::string> vars;
    for (size_t j = 0; j < nv; ++j) {
      std::string target = "v" + std::to_string(j);
      sys.sorts[target] = random_sort();
      sys.equations.push_back({target, eq_term(2 + static_cast<int>(pick(2)),
                                               sys.inputs, vars)});
      sys.variables.push_back(target);
      vars.push_back(target);
    }
    size_t ninit = pick(3);
    for (size_t j = 0; j < ninit && j < vars.size(); ++j)
      sys.initial[{vars[j], -static_cast<int>(pick(2))}] = const_term();
    size_t nout = pick(vars.size() + 1);
    for (size_t j = 0; j < nout; ++j) sys.outputs.push_back(vars[j]);
    return sys;
  }

  sre::RulesetDecl gen_ruleset(size_t i) {
    sre::RulesetDecl rs;
    rs.name = "rs" + std::to_string(i);
    size_t nr = 1 + pick(2);
    for (size_t j = 0; j < nr; ++j) {
      Term h1 = Term::hole("a");
      Term h2 = pick(3) == 0 ? Term::hole_sorted("b", "num") : Term::hole("b");
      Term pat;
      switch (pick(4)) {
        case 0: pat = Term::func("g" + std::to_string(j), {h1, h2}); break;
        case 1: pat = Term::add({h1, h2}); break;
        case 2: pat = Term::func("g" + std::to_string(j), {h1, Term::seq_hole("rest")}); break;
        default: pat = Term::ite(h1, h2, Term::wildcard()); break;
      }
      Term repl = flip() ? Term::hole("a") : Term::add({Term::hole("a"), Term::number(1)});
      rs.rules.emplace_back(pat, repl);
    }
    return rs;
  }

  // property-context term: bare variable references, the quantifier index as
  // the only symbolic input
  Term prop_term(int depth, const std::string &index) {
    if (depth <= 0 || pick(3) == 0) {
      switch (pick(4)) {
        case 0: return Term::boolean(flip());
        case 1: return Term::var("v" + std::to_string(pick(3)), static_cast<int>(pick(2)));
        case 2:
          if (!index.empty()) return Term::input(index);
          return Term::number(small_int());
        default:
          if (!atoms_.empty()) return atom_term();
          return Term::number(small_int());
      }
    }
    switch (pick(4)) {
      case 0: return Term::land({prop_term(depth - 1, index), prop_term(depth - 1, index)});
      case 1: {
        CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Le};
        return Term::cmp(ops[pick(3)], prop_term(depth - 1, index),
                         prop_term(depth - 1, index));
      }
      case 2:
        return Term::index(Term::var("v" + std::to_string(pick(3)), 0),
                           index.empty() ? Term::number(static_cast<long>(pick(4)))
                                         : Term::input(index));
      default:
        return Term::lnot(prop_term(depth - 1, index));
    }
  }

  sre::Property gen_property(size_t i) {
    sre::Property p;
    p.name = "prop" + std::to_string(i);
    sre::Property::Category cats[] = {sre::Property::Category::Global,
                                      sre::Property::Category::Local,
                                      sre::Property::Category::Control};
    p.category = cats[pick(3)];
    p.horizon = 1 + static_cast<int>(pick(3));
    if (flip()) p.guard = sre::Property::Guard{"ctl0", const_term()};
    std::string index;
    if (flip()) {
      index = "i";
      sre::Property::Quantifier q;
      q.index = index;
      q.lo = Term::number(static_cast<long>(pick(2)));
      q.hi = flip() ? Term::number(1 + static_cast<long>(pick(6)))
                    : Term::arith(ArithOp::Sub, {Term::input("width0"), Term::number(1)});
      p.quant = std::move(q);
    }
    p.body = Term::cmp(CmpOp::Eq, prop_term(2, index), prop_term(2, index));
    return p;
  }

  sre::JobDecl gen_job(size_t i) {
    sre::JobDecl j;
    j.name = "job" + std::to_string(i);
    j.spec_system = "sys0";
    j.impl_system = "sys1";
    j.k_spec = 1 + static_cast<int>(pick(3));
    j.k_imp = 1 + static_cast<int>(pick(3));
    size_t nr = pick(3);
    for (size_t k = 0; k < nr; ++k)
      j.renames.emplace_back("u" + std::to_string(k) + ".out", "v" + std::to_string(k));
    if (flip()) j.abstract_ruleset = "rs0";
    j.all_scenarios = flip();
    if (!j.all_scenarios)
      for (size_t k = 0; k <= pick(2); ++k)
        j.scenario_names.push_back("sc" + std::to_string(k));
    size_t nc = pick(3);
    for (size_t k = 0; k < nc; ++k)
      j.compares.emplace_back("v" + std::to_string(k), "u" + std::to_string(k) + ".out");
    return j;
  }
};

}  // namespace oracles
