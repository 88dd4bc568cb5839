#include "sre/sort.hpp"

namespace sre {

std::string to_string(const Sort &s) {
  switch (s.kind) {
    case Sort::Kind::Bool: return "bool";
    case Sort::Kind::Num: return "num";
    case Sort::Kind::Word:
      return s.length >= 0 ? "word[" + std::to_string(s.length) + "]" : "word";
    case Sort::Kind::Enum: return s.family.empty() ? "enum" : s.family;
    case Sort::Kind::Any: return "any";
  }
  return "?";
}

bool sorts_compatible(const Sort &a, const Sort &b) {
  if (a.is_any() || b.is_any()) return true;
  if (a.kind != b.kind) return false;
  if (a.kind == Sort::Kind::Word)
    return a.length < 0 || b.length < 0 || a.length == b.length;
  if (a.kind == Sort::Kind::Enum)
    return a.family.empty() || b.family.empty() || a.family == b.family;
  return true;
}

Sort sort_join(const Sort &a, const Sort &b) {
  if (a.is_any()) return b;
  if (b.is_any()) return a;
  if (a.kind == Sort::Kind::Word && a.length < 0) return b;
  if (a.kind == Sort::Kind::Enum && a.family.empty()) return b;
  return a;
}

namespace {

struct Inferer {
  const SortContext &ctx;

  SortResult infer(const Term &t, TermPath &path) {
    switch (t.kind()) {
      case Kind::Constant:
        return SortResult::good(t.cval().is_bool ? Sort::boolean()
                                                 : Sort::num(t.cval().domain));
      case Kind::Atom:
        // A free named constant (empty family) stands for absent/opaque data
        // and is compatible with any sort.
        return SortResult::good(t.family().empty() ? Sort::any()
                                                   : Sort::enum_family(t.family()));
      case Kind::SymInput: {
        auto it = ctx.sym_inputs.find(t.name());
        return SortResult::good(it != ctx.sym_inputs.end() ? it->second : Sort::any());
      }
      case Kind::VarRef: {
        if (ctx.vars.empty()) return SortResult::good(Sort::any());
        auto it = ctx.vars.find(t.name());
        if (it == ctx.vars.end())
          return SortResult::bad("unresolved reference " + t.name(), path);
        return SortResult::good(it->second);
      }
      case Kind::Hole:
        return SortResult::good(Sort::any());
      case Kind::Index: {
        auto base = child(t, 0, path);
        if (!base.ok) return base;
        if (!sorts_compatible(base.sort, Sort::word()))
          return bad_child(t, 0, path, "indexing a non-word value of sort " +
                                           to_string(base.sort));
        auto idx = child(t, 1, path);
        if (!idx.ok) return idx;
        if (!sorts_compatible(idx.sort, Sort::num()))
          return bad_child(t, 1, path, "index of sort " + to_string(idx.sort) +
                                           ", expected num");
        return SortResult::good(Sort::any());  // element sort unknown in general
      }
      case Kind::FuncApp: {
        const FuncSort *sig = nullptr;
        if (auto it = ctx.funcs.find(t.name()); it != ctx.funcs.end()) sig = &it->second;
        if (sig && !sig->args.empty() && sig->args.size() != t.arity())
          return SortResult::bad("function " + t.name() + " expects " +
                                     std::to_string(sig->args.size()) + " arguments, got " +
                                     std::to_string(t.arity()),
                                 path);
        for (size_t i = 0; i < t.arity(); ++i) {
          auto a = child(t, i, path);
          if (!a.ok) return a;
          if (sig && !sig->args.empty() && !sorts_compatible(a.sort, sig->args[i]))
            return bad_child(t, static_cast<int>(i), path,
                             "argument of sort " + to_string(a.sort) + ", expected " +
                                 to_string(sig->args[i]));
        }
        return SortResult::good(sig ? sig->result : Sort::any());
      }
      case Kind::Tuple: {
        for (size_t i = 0; i < t.arity(); ++i) {
          auto e = child(t, i, path);
          if (!e.ok) return e;
        }
        return SortResult::good(Sort::word(static_cast<int>(t.arity())));
      }
      case Kind::Compare: {
        auto l = child(t, 0, path);
        if (!l.ok) return l;
        auto r = child(t, 1, path);
        if (!r.ok) return r;
        CmpOp op = t.cmp_op();
        if (op == CmpOp::Eq || op == CmpOp::Ne) {
          if (!sorts_compatible(l.sort, r.sort))
            return bad_child(t, 1, path, "comparing " + to_string(l.sort) + " with " +
                                             to_string(r.sort));
        } else {
          if (!sorts_compatible(l.sort, Sort::num()))
            return bad_child(t, 0, path, "ordered comparison on sort " + to_string(l.sort));
          if (!sorts_compatible(r.sort, Sort::num()))
            return bad_child(t, 1, path, "ordered comparison on sort " + to_string(r.sort));
        }
        return SortResult::good(Sort::boolean());
      }
      case Kind::Logic: {
        for (size_t i = 0; i < t.arity(); ++i) {
          auto a = child(t, i, path);
          if (!a.ok) return a;
          if (!sorts_compatible(a.sort, Sort::boolean()))
            return bad_child(t, static_cast<int>(i), path,
                             "logical operand of sort " + to_string(a.sort));
        }
        return SortResult::good(Sort::boolean());
      }
      case Kind::Arith: {
        NumDomain dom = NumDomain::Nat;
        for (size_t i = 0; i < t.arity(); ++i) {
          auto a = child(t, i, path);
          if (!a.ok) return a;
          if (!sorts_compatible(a.sort, Sort::num()))
            return bad_child(t, static_cast<int>(i), path,
                             "arithmetic operand of sort " + to_string(a.sort));
          if (a.sort.kind == Sort::Kind::Num && a.sort.domain > dom) dom = a.sort.domain;
        }
        if (t.arith_op() == ArithOp::Sub && dom == NumDomain::Nat) dom = NumDomain::Int;
        if (t.arith_op() == ArithOp::Div) dom = NumDomain::Rat;
        return SortResult::good(Sort::num(dom));
      }
      case Kind::If: {
        auto c = child(t, 0, path);
        if (!c.ok) return c;
        if (!sorts_compatible(c.sort, Sort::boolean()))
          return bad_child(t, 0, path,
                           "IF condition of sort " + to_string(c.sort) + ", expected bool");
        auto a = child(t, 1, path);
        if (!a.ok) return a;
        auto b = child(t, 2, path);
        if (!b.ok) return b;
        if (!sorts_compatible(a.sort, b.sort))
          return bad_child(t, 2, path, "IF branches of different sorts " + to_string(a.sort) +
                                           " and " + to_string(b.sort));
        return SortResult::good(sort_join(a.sort, b.sort));
      }
    }
    return SortResult::good(Sort::any());
  }

  SortResult child(const Term &t, size_t i, TermPath &path) {
    path.push_back(static_cast<int>(i));
    SortResult r = infer(t.kid(i), path);
    path.pop_back();
    return r;
  }

  static SortResult bad_child(const Term &, int i, const TermPath &path, std::string msg) {
    TermPath p = path;
    p.push_back(i);
    return SortResult::bad(std::move(msg), std::move(p));
  }
};

}  // namespace

SortResult sort_of(const Term &t, const SortContext &ctx) {
  if (t.null()) return SortResult::bad("null term", {});
  Inferer inf{ctx};
  TermPath path;
  return inf.infer(t, path);
}

SortResult sort_of(const Term &t) {
  static const SortContext empty;
  return sort_of(t, empty);
}

}  // namespace sre
