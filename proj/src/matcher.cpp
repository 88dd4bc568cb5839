#include "sre/matcher.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "sre/rewrite.hpp"
#include "sre/sim.hpp"

namespace sre {

namespace {

bool hole_sort_ok(const Term &t, const std::string &sort) {
  if (sort == "bool")
    return (t.kind() == Kind::Constant && t.cval().is_bool) || t.kind() == Kind::Logic ||
           t.kind() == Kind::Compare;
  if (sort == "num")
    return (t.kind() == Kind::Constant && !t.cval().is_bool) || t.kind() == Kind::Arith;
  if (sort == "const") return t.kind() == Kind::Constant;
  if (sort == "atom") return t.kind() == Kind::Atom;
  if (sort == "tuple") return t.kind() == Kind::Tuple;
  if (sort == "var") return t.kind() == Kind::VarRef || t.kind() == Kind::SymInput;
  // otherwise the annotation names an enum family
  return t.kind() == Kind::Atom && t.family() == sort;
}

bool is_seq_hole(const Term &t) {
  return t.kind() == Kind::Hole && t.hole_kind() == HoleKind::Sequence;
}

// How many operands a commutative subset enumeration will still explore
// exhaustively when several sequence holes compete for the remainder.
constexpr size_t kSubsetEnumLimit = 16;

struct Matcher {
  Bindings b;
  std::vector<std::string> trail;

  size_t mark() const { return trail.size(); }
  void rollback(size_t m) {
    while (trail.size() > m) {
      b.erase(trail.back());
      trail.pop_back();
    }
  }

  bool bind(const std::string &name, const Term &val) {
    auto it = b.find(name);
    if (it != b.end()) return term_equal(it->second, val);
    b.emplace(name, val);
    trail.push_back(name);
    return true;
  }

  bool match(const Term &e, const Term &p) {
    if (p.kind() == Kind::Hole) {
      switch (p.hole_kind()) {
        case HoleKind::Wildcard: return true;
        case HoleKind::Named: return bind(p.name(), e);
        case HoleKind::Sorted:
          return hole_sort_ok(e, p.family()) && bind(p.name(), e);
        case HoleKind::Sequence:
          // bare sequence hole outside an operand list: a one-term sequence
          return bind(p.name(), Term::tuple({e}));
      }
      return false;
    }
    if (!p.with_hole()) return term_equal(e, p);
    if (e.kind() != p.kind()) return false;
    switch (p.kind()) {
      case Kind::Constant:
      case Kind::Atom:
      case Kind::SymInput:
      case Kind::VarRef:
      case Kind::Hole:
        return term_equal(e, p);  // unreachable: hole-free handled above
      case Kind::Index:
        return match(e.kid(0), p.kid(0)) && match(e.kid(1), p.kid(1));
      case Kind::FuncApp:
        if (e.name() != p.name()) return false;
        return match_ordered(e.kids(), p.kids());
      case Kind::Tuple:
        return match_ordered(e.kids(), p.kids());
      case Kind::Compare:
        if (e.cmp_op() != p.cmp_op() ) return false;
        return match_pairwise(e, p);
      case Kind::Logic: {
        if (e.logic_op() != p.logic_op()) return false;
        LogicOp op = p.logic_op();
        if (op == LogicOp::And || op == LogicOp::Or || op == LogicOp::Xor)
          return match_commutative(e.kids(), p.kids());
        if (op == LogicOp::Not) return match_pairwise(e, p);
        // nor/nand: binary commutative, no flattening — try both orders
        if (e.arity() != p.arity()) return false;
        size_t m = mark();
        if (match_pairwise(e, p)) return true;
        rollback(m);
        if (e.arity() == 2) {
          if (match(e.kid(1), p.kid(0)) && match(e.kid(0), p.kid(1))) return true;
          rollback(m);
        }
        return false;
      }
      case Kind::Arith: {
        ArithOp op = p.arith_op();
        if (e.arith_op() != op) return false;
        if (op == ArithOp::Add || op == ArithOp::Mul)
          return match_commutative(e.kids(), p.kids());
        return match_pairwise(e, p);
      }
      case Kind::If:
        return match_pairwise(e, p);
    }
    return false;
  }

  bool match_pairwise(const Term &e, const Term &p) {
    if (e.arity() != p.arity()) return false;
    for (size_t i = 0; i < e.arity(); ++i)
      if (!match(e.kid(i), p.kid(i))) return false;
    return true;
  }

  bool match_ordered(const TermList &es, const TermList &ps) {
    return ordered_rec(es, 0, ps, 0);
  }

  bool ordered_rec(const TermList &es, size_t ei, const TermList &ps, size_t pi) {
    if (pi == ps.size()) return ei == es.size();
    const Term &p = ps[pi];
    if (is_seq_hole(p)) {
      auto bound = b.find(p.name());
      if (bound != b.end()) {
        const Term &seq = bound->second;
        size_t len = seq.kind() == Kind::Tuple ? seq.arity() : 1;
        if (ei + len > es.size()) return false;
        for (size_t i = 0; i < len; ++i) {
          const Term &want = seq.kind() == Kind::Tuple ? seq.kid(i) : seq;
          if (!term_equal(es[ei + i], want)) return false;
        }
        return ordered_rec(es, ei + len, ps, pi + 1);
      }
      for (size_t len = 0; ei + len <= es.size(); ++len) {
        size_t m = mark();
        TermList taken(es.begin() + static_cast<long>(ei),
                       es.begin() + static_cast<long>(ei + len));
        if (bind(p.name(), Term::tuple(std::move(taken))) &&
            ordered_rec(es, ei + len, ps, pi + 1))
          return true;
        rollback(m);
      }
      return false;
    }
    if (ei >= es.size()) return false;
    size_t m = mark();
    if (match(es[ei], p) && ordered_rec(es, ei + 1, ps, pi + 1)) return true;
    rollback(m);
    return false;
  }

  bool match_commutative(const TermList &es, const TermList &ps) {
    std::vector<char> used(es.size(), 0);
    return comm_rec(es, used, ps, 0);
  }

  bool comm_rec(const TermList &es, std::vector<char> &used, const TermList &ps, size_t pi) {
    if (pi == ps.size()) {
      for (char u : used)
        if (!u) return false;
      return true;
    }
    const Term &p = ps[pi];
    if (is_seq_hole(p)) {
      std::vector<size_t> rem;
      for (size_t j = 0; j < es.size(); ++j)
        if (!used[j]) rem.push_back(j);
      auto bound = b.find(p.name());
      if (bound != b.end()) {
        // consume exactly the previously bound operands
        const Term &seq = bound->second;
        size_t len = seq.kind() == Kind::Tuple ? seq.arity() : 1;
        std::vector<size_t> taken;
        for (size_t i = 0; i < len; ++i) {
          const Term &want = seq.kind() == Kind::Tuple ? seq.kid(i) : seq;
          bool found = false;
          for (size_t j : rem) {
            if (used[j]) continue;
            if (std::find(taken.begin(), taken.end(), j) != taken.end()) continue;
            if (term_equal(es[j], want)) {
              taken.push_back(j);
              found = true;
              break;
            }
          }
          if (!found) return false;
        }
        for (size_t j : taken) used[j] = 1;
        if (comm_rec(es, used, ps, pi + 1)) return true;
        for (size_t j : taken) used[j] = 0;
        return false;
      }
      bool last_unbound_seq = true;
      for (size_t k = pi + 1; k < ps.size(); ++k)
        if (is_seq_hole(ps[k]) ? b.count(ps[k].name()) != 0 : true) last_unbound_seq = false;
      if (last_unbound_seq && pi + 1 == ps.size()) {
        // sole trailing sequence hole takes everything left
        TermList taken;
        for (size_t j : rem) taken.push_back(es[j]);
        size_t m = mark();
        if (bind(p.name(), Term::tuple(std::move(taken)))) {
          for (size_t j : rem) used[j] = 1;
          if (comm_rec(es, used, ps, pi + 1)) return true;
          for (size_t j : rem) used[j] = 0;
        }
        rollback(m);
        return false;
      }
      // several sequence holes share the remainder: enumerate subsets
      if (rem.size() > kSubsetEnumLimit) return false;
      for (uint64_t mask = 0; mask < (uint64_t{1} << rem.size()); ++mask) {
        size_t m = mark();
        TermList taken;
        std::vector<size_t> idx;
        for (size_t r = 0; r < rem.size(); ++r)
          if (mask & (uint64_t{1} << r)) {
            taken.push_back(es[rem[r]]);
            idx.push_back(rem[r]);
          }
        if (bind(p.name(), Term::tuple(std::move(taken)))) {
          for (size_t j : idx) used[j] = 1;
          if (comm_rec(es, used, ps, pi + 1)) return true;
          for (size_t j : idx) used[j] = 0;
        }
        rollback(m);
      }
      return false;
    }
    for (size_t j = 0; j < es.size(); ++j) {
      if (used[j]) continue;
      size_t m = mark();
      used[j] = 1;
      if (match(es[j], p) && comm_rec(es, used, ps, pi + 1)) return true;
      used[j] = 0;
      rollback(m);
    }
    return false;
  }
};

// Best-effort positional diff for diagnostics after a failed match.
struct Differ {
  Bindings greedy;
  std::vector<Mismatch> &out;

  explicit Differ(std::vector<Mismatch> &o) : out(o) {}

  void record(const TermPath &path, const Term &p, const Term &e) {
    out.push_back(Mismatch{path, p, e});
  }

  void diff(const Term &e, const Term &p, TermPath path) {
    if (p.kind() == Kind::Hole) {
      switch (p.hole_kind()) {
        case HoleKind::Wildcard:
        case HoleKind::Sequence:
          return;
        case HoleKind::Sorted:
          if (!hole_sort_ok(e, p.family())) {
            record(path, p, e);
            return;
          }
          [[fallthrough]];
        case HoleKind::Named: {
          auto it = greedy.find(p.name());
          if (it != greedy.end()) {
            if (!term_equal(it->second, e)) record(path, p, e);
          } else {
            greedy.emplace(p.name(), e);
          }
          return;
        }
      }
      return;
    }
    if (!p.with_hole() && term_equal(e, p)) return;
    if (e.kind() != p.kind()) {
      record(path, p, e);
      return;
    }
    bool head_same = true;
    switch (p.kind()) {
      case Kind::Constant:
      case Kind::Atom:
      case Kind::SymInput:
      case Kind::VarRef:
        record(path, p, e);
        return;
      case Kind::FuncApp:
        head_same = e.name() == p.name();
        break;
      case Kind::Compare:
        head_same = e.cmp_op() == p.cmp_op();
        break;
      case Kind::Logic:
        head_same = e.logic_op() == p.logic_op();
        break;
      case Kind::Arith:
        head_same = e.arith_op() == p.arith_op();
        break;
      default:
        break;
    }
    if (!head_same) {
      record(path, p, e);
      return;
    }
    size_t p_fixed = 0;
    bool p_has_seq = false;
    for (const Term &k : p.kids()) {
      if (is_seq_hole(k))
        p_has_seq = true;
      else
        ++p_fixed;
    }
    if ((p_has_seq && e.arity() < p_fixed) || (!p_has_seq && e.arity() != p.arity())) {
      record(path, p, e);
      return;
    }
    size_t n = std::min(e.arity(), p.arity());
    for (size_t i = 0; i < n; ++i) {
      path.push_back(static_cast<int>(i));
      diff(e.kid(i), p.kid(i), path);
      path.pop_back();
    }
  }
};

}  // namespace

MatchOutcome match_q(const Term &expr, const Term &pattern) {
  MatchOutcome out;
  if (expr.null() || pattern.null()) {
    out.mismatches.push_back(Mismatch{{}, pattern, expr});
    return out;
  }
  Matcher m;
  if (m.match(expr, pattern)) {
    out.matched = true;
    out.bindings = std::move(m.b);
    return out;
  }
  Differ d(out.mismatches);
  d.diff(expr, pattern, {});
  if (out.mismatches.empty()) out.mismatches.push_back(Mismatch{{}, pattern, expr});
  return out;
}

bool try_match(const Term &expr, const Term &pattern, Bindings &out) {
  if (expr.null() || pattern.null()) return false;
  Matcher m;
  if (!m.match(expr, pattern)) return false;
  out = std::move(m.b);
  return true;
}

namespace {

Term instantiate_rec(const Term &p, const Bindings &b) {
  if (!p.with_hole()) return p;
  if (p.kind() == Kind::Hole) {
    if (p.hole_kind() == HoleKind::Wildcard) return p;
    auto it = b.find(p.name());
    if (it == b.end()) return p;
    if (p.hole_kind() == HoleKind::Sequence) {
      const Term &seq = it->second;
      if (seq.kind() == Kind::Tuple && seq.arity() == 1) return seq.kid(0);
      return seq;  // spliced by the parent in operand-list positions
    }
    return it->second;
  }
  TermList kids;
  kids.reserve(p.arity());
  for (const Term &k : p.kids()) {
    if (is_seq_hole(k)) {
      auto it = b.find(k.name());
      if (it == b.end()) continue;  // unbound sequences vanish
      const Term &seq = it->second;
      if (seq.kind() == Kind::Tuple)
        for (const Term &el : seq.kids()) kids.push_back(el);
      else
        kids.push_back(seq);
      continue;
    }
    kids.push_back(instantiate_rec(k, b));
  }
  switch (p.kind()) {
    case Kind::Index: return Term::index(kids.at(0), kids.at(1));
    case Kind::FuncApp: return Term::func(p.name(), std::move(kids));
    case Kind::Tuple: return Term::tuple(std::move(kids));
    case Kind::Compare: return Term::cmp(p.cmp_op(), kids.at(0), kids.at(1));
    case Kind::Logic: return Term::logic(p.logic_op(), std::move(kids));
    case Kind::Arith: return Term::arith(p.arith_op(), std::move(kids));
    case Kind::If: return Term::ite(kids.at(0), kids.at(1), kids.at(2));
    default: return p;
  }
}

}  // namespace

Term instantiate(const Term &pattern, const Bindings &bindings) {
  if (pattern.null()) return pattern;
  return instantiate_rec(pattern, bindings);
}

namespace {

enum class SymClass { Unknown, Bool, Num, Enum };

struct SymInfo {
  SymClass cls = SymClass::Unknown;
  std::string family;
};

struct SymScan {
  std::map<std::string, SymInfo> syms;
  bool saw_varref = false;
  std::set<std::string> unknown_funcs;
  const FuncRegistry *funcs = nullptr;
  const std::map<std::string, std::vector<std::string>> *families = nullptr;

  void classify(const Term &t, SymClass cls, const std::string &family = "") {
    if (t.kind() != Kind::SymInput) return;
    SymInfo &info = syms[t.name()];
    if (info.cls == SymClass::Unknown) {
      info.cls = cls;
      info.family = family;
    } else if (info.cls != cls && cls != SymClass::Unknown) {
      // conflicting uses: fall back to numeric sampling for this symbol
      if (info.cls != SymClass::Enum) info.cls = SymClass::Num;
    }
  }

  void scan(const Term &t) {
    switch (t.kind()) {
      case Kind::SymInput:
        syms.emplace(t.name(), SymInfo{});
        return;
      case Kind::VarRef:
        saw_varref = true;
        return;
      case Kind::Constant:
      case Kind::Atom:
      case Kind::Hole:
        return;
      case Kind::FuncApp: {
        const FuncDef *def = funcs ? funcs->find(t.name()) : nullptr;
        if (!def || !def->numeric) unknown_funcs.insert(t.name());
        break;
      }
      case Kind::Logic:
        for (const Term &k : t.kids()) classify(k, SymClass::Bool);
        break;
      case Kind::If:
        classify(t.kid(0), SymClass::Bool);
        break;
      case Kind::Arith:
        for (const Term &k : t.kids()) classify(k, SymClass::Num);
        break;
      case Kind::Index:
        classify(t.kid(1), SymClass::Num);
        break;
      case Kind::Tuple:
        // data words are tuples of bits
        for (const Term &k : t.kids()) classify(k, SymClass::Bool);
        break;
      case Kind::Compare: {
        CmpOp op = t.cmp_op();
        if (op != CmpOp::Eq && op != CmpOp::Ne) {
          classify(t.kid(0), SymClass::Num);
          classify(t.kid(1), SymClass::Num);
        } else {
          for (int side = 0; side < 2; ++side) {
            const Term &s = t.kid(static_cast<size_t>(side));
            const Term &o = t.kid(static_cast<size_t>(1 - side));
            if (s.kind() != Kind::SymInput) continue;
            if (o.kind() == Kind::Constant)
              classify(s, o.cval().is_bool ? SymClass::Bool : SymClass::Num);
            else if (o.kind() == Kind::Atom && !o.family().empty() && families &&
                     families->count(o.family()))
              classify(s, SymClass::Enum, o.family());
          }
        }
        break;
      }
    }
    for (const Term &k : t.kids()) scan(k);
  }
};

}  // namespace

EquivResult equiv_terms(const Term &a, const Term &b, const EquivOptions &opts) {
  EquivResult res;
  if (a.null() || b.null()) {
    res.note = "null term";
    return res;
  }
  RuleSet simp = default_simplifier(opts.funcs);
  Term na, nb;
  try {
    na = replace_repeated(a, simp, opts.max_iterations);
    nb = replace_repeated(b, simp, opts.max_iterations);
  } catch (const NonTermination &) {
    res.note = "simplification did not terminate";
    return res;
  }
  if (term_equal(na, nb)) {
    res.verdict = Equiv::Equal;
    res.note = "identical normal forms";
    return res;
  }

  SymScan scan;
  scan.funcs = opts.funcs;
  scan.families = opts.families;
  scan.scan(na);
  scan.scan(nb);
  if (scan.saw_varref) {
    res.note = "distinct normal forms contain variable references";
    return res;
  }
  if (!scan.unknown_funcs.empty()) {
    res.note = "uninterpreted function " + *scan.unknown_funcs.begin();
    return res;
  }

  std::vector<std::pair<std::string, SymInfo>> syms(scan.syms.begin(), scan.syms.end());
  for (auto &[name, info] : syms) {
    if (info.cls == SymClass::Unknown) info.cls = SymClass::Num;
    if (info.cls == SymClass::Enum &&
        (!opts.families || !opts.families->count(info.family)))
      info.cls = SymClass::Num;
  }

  auto eval_pair = [&](const Assignment &asg, std::optional<bool> &differ) -> bool {
    EvalEnv env;
    env.funcs = opts.funcs;
    env.inputs = &asg;
    EvalResult va = eval(na, env);
    EvalResult vb = eval(nb, env);
    if (!va.ok() || !vb.ok()) return false;
    differ = !(*va.value == *vb.value);
    return true;
  };

  // domain sizes for an exhaustive product
  bool any_num = false;
  uint64_t product = 1;
  const uint64_t cap = uint64_t{1} << (opts.bool_limit < 30 ? opts.bool_limit : 30);
  for (const auto &[name, info] : syms) {
    if (info.cls == SymClass::Num) {
      any_num = true;
      break;
    }
    uint64_t card = info.cls == SymClass::Bool
                        ? 2
                        : static_cast<uint64_t>(opts.families->at(info.family).size());
    if (card == 0) card = 1;
    if (product > cap / card) {
      product = cap + 1;
      break;
    }
    product *= card;
  }

  if (!any_num && product <= cap) {
    // exhaustive enumeration: an absolute verdict
    std::vector<uint64_t> digit(syms.size(), 0);
    bool eval_failed = false;
    uint64_t tried = 0;
    while (true) {
      Assignment asg;
      for (size_t i = 0; i < syms.size(); ++i) {
        const SymInfo &info = syms[i].second;
        if (info.cls == SymClass::Bool)
          asg[syms[i].first] = Value::boolean(digit[i] == 1);
        else
          asg[syms[i].first] =
              Value::make_atom(opts.families->at(info.family)[digit[i]], info.family);
      }
      std::optional<bool> differ;
      if (!eval_pair(asg, differ)) {
        eval_failed = true;
      } else if (*differ) {
        res.verdict = Equiv::NotEqual;
        res.witness = std::move(asg);
        res.note = "counterexample assignment found by exhaustive evaluation";
        return res;
      }
      ++tried;
      // increment the mixed-radix counter
      size_t i = 0;
      for (; i < syms.size(); ++i) {
        uint64_t card = syms[i].second.cls == SymClass::Bool
                            ? 2
                            : static_cast<uint64_t>(
                                  opts.families->at(syms[i].second.family).size());
        if (++digit[i] < card) break;
        digit[i] = 0;
      }
      if (i == syms.size()) break;
    }
    if (eval_failed) {
      res.note = "exhaustive evaluation hit evaluation errors";
      return res;
    }
    res.verdict = Equiv::Equal;
    res.note = "agree on all " + std::to_string(tried) + " assignments";
    return res;
  }

  // numeric or oversized domains: random sampling refutes but never proves
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<long> num_p(-999, 999);
  std::uniform_int_distribution<long> num_q(1, 9);
  std::uniform_int_distribution<int> coin(0, 1);
  int evaluated = 0;
  for (int s = 0; s < opts.sample_points; ++s) {
    Assignment asg;
    for (const auto &[name, info] : syms) {
      switch (info.cls) {
        case SymClass::Bool:
          asg[name] = Value::boolean(coin(rng) == 1);
          break;
        case SymClass::Enum: {
          const auto &members = opts.families->at(info.family);
          std::uniform_int_distribution<size_t> pick(0, members.size() - 1);
          asg[name] = Value::make_atom(members[pick(rng)], info.family);
          break;
        }
        default:
          asg[name] = Value::num(Rational(num_p(rng), num_q(rng)));
          break;
      }
    }
    std::optional<bool> differ;
    if (!eval_pair(asg, differ)) continue;
    ++evaluated;
    if (*differ) {
      res.verdict = Equiv::NotEqual;
      res.witness = std::move(asg);
      res.note = "counterexample assignment found by random sampling";
      return res;
    }
  }
  res.note = "distinct normal forms; no difference on " + std::to_string(evaluated) +
             " sampled assignments";
  return res;
}

std::vector<ExpectedOutcome> verify_expected(const Trace &trace,
                                             const std::vector<ExpectedCheck> &checks) {
  std::vector<ExpectedOutcome> out;
  out.reserve(checks.size());
  for (const ExpectedCheck &c : checks) {
    ExpectedOutcome eo;
    if (c.cycle < 0 || c.cycle > trace.cycles()) {
      eo.error = "cycle " + std::to_string(c.cycle) + " outside trace rows 0.." +
                 std::to_string(trace.cycles());
    } else {
      Term t = trace.binding(c.variable, c.cycle);
      if (t.null())
        eo.error = "no binding for " + c.variable + " at row " + std::to_string(c.cycle);
      else
        eo.outcome = match_q(t, c.pattern);
    }
    out.push_back(std::move(eo));
  }
  return out;
}

}  // namespace sre
