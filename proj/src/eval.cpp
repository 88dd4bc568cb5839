#include "sre/eval.hpp"

#include <sstream>

namespace sre {

bool Value::operator==(const Value &o) const {
  if (tag != o.tag) return false;
  switch (tag) {
    case Tag::Bool: return b == o.b;
    case Tag::Num: return q == o.q;
    case Tag::Atom: return atom == o.atom;
    case Tag::Tuple:
      if (elems.size() != o.elems.size()) return false;
      for (size_t i = 0; i < elems.size(); ++i)
        if (!(elems[i] == o.elems[i])) return false;
      return true;
  }
  return false;
}

std::string to_string(const Value &v) {
  switch (v.tag) {
    case Value::Tag::Bool: return v.b ? "true" : "false";
    case Value::Tag::Num: {
      std::ostringstream os;
      os << v.q;
      return os.str();
    }
    case Value::Tag::Atom: return v.atom;
    case Value::Tag::Tuple: {
      std::string s = "[";
      for (size_t i = 0; i < v.elems.size(); ++i) {
        if (i) s += ", ";
        s += to_string(v.elems[i]);
      }
      return s + "]";
    }
  }
  return "?";
}

Term value_to_term(const Value &v) {
  switch (v.tag) {
    case Value::Tag::Bool: return Term::boolean(v.b);
    case Value::Tag::Num: return Term::number(v.q);
    case Value::Tag::Atom: return Term::atom(v.atom, v.family);
    case Value::Tag::Tuple: {
      TermList es;
      es.reserve(v.elems.size());
      for (const Value &e : v.elems) es.push_back(value_to_term(e));
      return Term::tuple(std::move(es));
    }
  }
  return Term();
}

std::optional<Value> term_to_value(const Term &t) {
  if (t.null()) return std::nullopt;
  switch (t.kind()) {
    case Kind::Constant:
      return t.cval().is_bool ? Value::boolean(t.cval().b) : Value::num(t.cval().q);
    case Kind::Atom:
      return Value::make_atom(t.name(), t.family());
    case Kind::Tuple: {
      std::vector<Value> es;
      es.reserve(t.arity());
      for (const Term &k : t.kids()) {
        auto v = term_to_value(k);
        if (!v) return std::nullopt;
        es.push_back(std::move(*v));
      }
      return Value::tuple(std::move(es));
    }
    default:
      return std::nullopt;
  }
}

bool is_value_term(const Term &t) {
  if (t.null()) return false;
  switch (t.kind()) {
    case Kind::Constant:
    case Kind::Atom:
      return true;
    case Kind::Tuple:
      for (const Term &k : t.kids())
        if (!is_value_term(k)) return false;
      return true;
    default:
      return false;
  }
}

FuncRegistry &FuncRegistry::add(FuncDef def) {
  defs_[def.name] = std::move(def);
  return *this;
}

const FuncDef *FuncRegistry::find(const std::string &name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

std::vector<std::string> FuncRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(defs_.size());
  for (const auto &[k, v] : defs_) out.push_back(k);
  return out;
}

namespace {

EvalResult eval_rec(const Term &t, const EvalEnv &env) {
  switch (t.kind()) {
    case Kind::Constant:
      return EvalResult::good(t.cval().is_bool ? Value::boolean(t.cval().b)
                                               : Value::num(t.cval().q));
    case Kind::Atom:
      return EvalResult::good(Value::make_atom(t.name(), t.family()));
    case Kind::SymInput: {
      if (env.inputs) {
        auto it = env.inputs->find(t.name());
        if (it != env.inputs->end()) return EvalResult::good(it->second);
      }
      return EvalResult::bad("unbound symbolic input " + t.name());
    }
    case Kind::VarRef: {
      if (env.vars) {
        auto it = env.vars->find({t.name(), t.offset()});
        if (it != env.vars->end()) return EvalResult::good(it->second);
      }
      return EvalResult::bad("unbound variable " + t.name() +
                             (t.offset() ? "(n-" + std::to_string(t.offset()) + ")" : "(n)"));
    }
    case Kind::Hole:
      return EvalResult::bad("cannot evaluate a pattern hole");
    case Kind::Index: {
      EvalResult base = eval_rec(t.kid(0), env);
      if (!base.ok()) return base;
      EvalResult idx = eval_rec(t.kid(1), env);
      if (!idx.ok()) return idx;
      if (base.value->tag != Value::Tag::Tuple)
        return EvalResult::bad("indexing a non-word value " + to_string(*base.value));
      if (idx.value->tag != Value::Tag::Num ||
          boost::multiprecision::denominator(idx.value->q) != 1)
        return EvalResult::bad("non-integer index " + to_string(*idx.value));
      Rational qi = idx.value->q;
      if (qi < 0 || qi >= Rational(static_cast<long>(base.value->elems.size())))
        return EvalResult::bad("index " + to_string(*idx.value) + " out of range for word of " +
                               std::to_string(base.value->elems.size()));
      long i = static_cast<long>(boost::multiprecision::numerator(qi));
      return EvalResult::good(base.value->elems[static_cast<size_t>(i)]);
    }
    case Kind::FuncApp: {
      const FuncDef *def = env.funcs ? env.funcs->find(t.name()) : nullptr;
      if (!def || !def->numeric)
        return EvalResult::bad("unregistered function " + t.name());
      std::vector<Value> args;
      args.reserve(t.arity());
      for (const Term &k : t.kids()) {
        EvalResult a = eval_rec(k, env);
        if (!a.ok()) return a;
        args.push_back(std::move(*a.value));
      }
      std::optional<Value> r = def->numeric(args);
      if (!r) return EvalResult::bad("function " + t.name() + " inapplicable to arguments");
      return EvalResult::good(std::move(*r));
    }
    case Kind::Tuple: {
      std::vector<Value> es;
      es.reserve(t.arity());
      for (const Term &k : t.kids()) {
        EvalResult e = eval_rec(k, env);
        if (!e.ok()) return e;
        es.push_back(std::move(*e.value));
      }
      return EvalResult::good(Value::tuple(std::move(es)));
    }
    case Kind::Compare: {
      EvalResult l = eval_rec(t.kid(0), env);
      if (!l.ok()) return l;
      EvalResult r = eval_rec(t.kid(1), env);
      if (!r.ok()) return r;
      CmpOp op = t.cmp_op();
      if (op == CmpOp::Eq) return EvalResult::good(Value::boolean(*l.value == *r.value));
      if (op == CmpOp::Ne) return EvalResult::good(Value::boolean(!(*l.value == *r.value)));
      if (!l.value->is_num() || !r.value->is_num())
        return EvalResult::bad("ordered comparison on non-numeric values");
      const Rational &a = l.value->q;
      const Rational &b = r.value->q;
      bool v = false;
      switch (op) {
        case CmpOp::Lt: v = a < b; break;
        case CmpOp::Le: v = a <= b; break;
        case CmpOp::Gt: v = a > b; break;
        case CmpOp::Ge: v = a >= b; break;
        default: break;
      }
      return EvalResult::good(Value::boolean(v));
    }
    case Kind::Logic: {
      std::vector<bool> vs;
      vs.reserve(t.arity());
      for (const Term &k : t.kids()) {
        EvalResult e = eval_rec(k, env);
        if (!e.ok()) return e;
        if (!e.value->is_bool())
          return EvalResult::bad("logical operand is not boolean: " + to_string(*e.value));
        vs.push_back(e.value->b);
      }
      bool v = false;
      switch (t.logic_op()) {
        case LogicOp::Not: v = !vs[0]; break;
        case LogicOp::And: {
          v = true;
          for (bool x : vs) v = v && x;
          break;
        }
        case LogicOp::Or: {
          v = false;
          for (bool x : vs) v = v || x;
          break;
        }
        case LogicOp::Xor: {
          v = false;
          for (bool x : vs) v = v != x;
          break;
        }
        case LogicOp::Nor: {
          v = false;
          for (bool x : vs) v = v || x;
          v = !v;
          break;
        }
        case LogicOp::Nand: {
          v = true;
          for (bool x : vs) v = v && x;
          v = !v;
          break;
        }
      }
      return EvalResult::good(Value::boolean(v));
    }
    case Kind::Arith: {
      std::vector<Rational> vs;
      vs.reserve(t.arity());
      for (const Term &k : t.kids()) {
        EvalResult e = eval_rec(k, env);
        if (!e.ok()) return e;
        if (!e.value->is_num())
          return EvalResult::bad("arithmetic operand is not numeric: " + to_string(*e.value));
        vs.push_back(e.value->q);
      }
      Rational v;
      switch (t.arith_op()) {
        case ArithOp::Add: {
          v = 0;
          for (const Rational &x : vs) v += x;
          break;
        }
        case ArithOp::Mul: {
          v = 1;
          for (const Rational &x : vs) v *= x;
          break;
        }
        case ArithOp::Sub: {
          v = vs[0];
          for (size_t i = 1; i < vs.size(); ++i) v -= vs[i];
          break;
        }
        case ArithOp::Div: {
          v = vs[0];
          for (size_t i = 1; i < vs.size(); ++i) {
            if (vs[i] == 0) return EvalResult::bad("division by zero");
            v /= vs[i];
          }
          break;
        }
      }
      return EvalResult::good(Value::num(std::move(v)));
    }
    case Kind::If: {
      EvalResult c = eval_rec(t.kid(0), env);
      if (!c.ok()) return c;
      if (!c.value->is_bool())
        return EvalResult::bad("IF condition is not boolean: " + to_string(*c.value));
      return eval_rec(t.kid(c.value->b ? 1 : 2), env);
    }
  }
  return EvalResult::bad("unknown term kind");
}

}  // namespace

EvalResult eval(const Term &t, const EvalEnv &env) {
  if (t.null()) return EvalResult::bad("null term");
  return eval_rec(t, env);
}

}  // namespace sre
