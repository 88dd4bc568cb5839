#include "sre/term.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <unordered_set>

namespace sre {

const char *to_cstr(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
  }
  return "?";
}

const char *to_cstr(LogicOp op) {
  switch (op) {
    case LogicOp::Not: return "not";
    case LogicOp::And: return "and";
    case LogicOp::Or: return "or";
    case LogicOp::Xor: return "xor";
    case LogicOp::Nor: return "nor";
    case LogicOp::Nand: return "nand";
  }
  return "?";
}

const char *to_cstr(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

uint64_t hash_string(const std::string &s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t hash_rational(const Rational &q) {
  // content-based and deterministic across runs
  std::ostringstream os;
  os << q;
  return hash_string(os.str());
}

void finish(TermNode &n) {
  uint64_t h = mix(0xb5ad4eceda1ce2a9ULL, static_cast<uint64_t>(n.kind));
  h = mix(h, n.op);
  h = mix(h, static_cast<uint64_t>(n.offset));
  if (n.kind == Kind::Constant) {
    if (n.cval.is_bool)
      h = mix(h, n.cval.b ? 2u : 1u);
    else
      h = mix(h, hash_rational(n.cval.q));
  }
  if (!n.name.empty()) h = mix(h, hash_string(n.name));
  if (!n.family.empty()) h = mix(h, hash_string(n.family));
  uint64_t count = 1;
  bool ground = true;
  bool with_hole = false;
  switch (n.kind) {
    case Kind::SymInput:
    case Kind::VarRef:
    case Kind::Hole: ground = false; break;
    default: break;
  }
  if (n.kind == Kind::Hole) with_hole = true;
  for (const Term &k : n.kids) {
    h = mix(h, k.hash());
    count += k.node_count();
    ground = ground && k.ground();
    with_hole = with_hole || k.with_hole();
  }
  n.hash = h;
  n.node_count = count;
  n.ground = ground;
  n.with_hole = with_hole;
}

bool commutative(ArithOp op) { return op == ArithOp::Add || op == ArithOp::Mul; }
bool commutative(LogicOp op) {
  return op == LogicOp::And || op == LogicOp::Or || op == LogicOp::Xor ||
         op == LogicOp::Nor || op == LogicOp::Nand;
}
bool flattenable(ArithOp op) { return op == ArithOp::Add || op == ArithOp::Mul; }
bool flattenable(LogicOp op) {
  return op == LogicOp::And || op == LogicOp::Or || op == LogicOp::Xor;
}

int kind_rank(Kind k) {
  switch (k) {
    case Kind::Constant: return 0;
    case Kind::Atom: return 1;
    case Kind::SymInput: return 2;
    case Kind::VarRef: return 3;
    case Kind::Index: return 4;
    case Kind::FuncApp: return 5;
    case Kind::Tuple: return 6;
    case Kind::Compare: return 7;
    case Kind::Logic: return 8;
    case Kind::Arith: return 9;
    case Kind::If: return 10;
    case Kind::Hole: return 11;
  }
  return 12;
}

int cmp3(int a, int b) { return a < b ? -1 : (a > b ? 1 : 0); }

}  // namespace

int term_compare(const Term &a, const Term &b) {
  if (a.same_node(b)) return 0;
  if (int c = cmp3(kind_rank(a.kind()), kind_rank(b.kind()))) return c;
  const TermNode &na = a.node();
  const TermNode &nb = b.node();
  switch (a.kind()) {
    case Kind::Constant: {
      if (na.cval.is_bool != nb.cval.is_bool) return na.cval.is_bool ? -1 : 1;
      if (na.cval.is_bool) return cmp3(na.cval.b, nb.cval.b);
      if (na.cval.q < nb.cval.q) return -1;
      if (nb.cval.q < na.cval.q) return 1;
      return 0;
    }
    case Kind::Atom:
      if (int c = na.family.compare(nb.family)) return c < 0 ? -1 : 1;
      if (int c = na.name.compare(nb.name)) return c < 0 ? -1 : 1;
      return 0;
    case Kind::SymInput:
      if (int c = na.name.compare(nb.name)) return c < 0 ? -1 : 1;
      return 0;
    case Kind::VarRef:
      if (int c = na.name.compare(nb.name)) return c < 0 ? -1 : 1;
      return cmp3(na.offset, nb.offset);
    case Kind::FuncApp:
    case Kind::Hole:
      if (int c = na.name.compare(nb.name)) return c < 0 ? -1 : 1;
      break;
    default:
      break;
  }
  if (int c = cmp3(na.op, nb.op)) return c;
  if (int c = cmp3(static_cast<int>(na.kids.size()), static_cast<int>(nb.kids.size()))) return c;
  for (size_t i = 0; i < na.kids.size(); ++i)
    if (int c = term_compare(na.kids[i], nb.kids[i])) return c;
  return 0;
}

bool term_equal(const Term &a, const Term &b) {
  if (a.same_node(b)) return true;
  if (a.null() || b.null()) return false;
  if (a.hash() != b.hash()) return false;
  return term_compare(a, b) == 0;
}

bool term_less(const Term &a, const Term &b) { return term_compare(a, b) < 0; }

Term Term::make(TermNode &&n) {
  finish(n);
  Term t;
  t.p_ = std::make_shared<const TermNode>(std::move(n));
  return t;
}

Term Term::boolean(bool v) {
  TermNode n;
  n.kind = Kind::Constant;
  n.cval.is_bool = true;
  n.cval.b = v;
  return make(std::move(n));
}

Term Term::number(Rational q) {
  TermNode n;
  n.kind = Kind::Constant;
  n.cval.is_bool = false;
  if (boost::multiprecision::denominator(q) == 1)
    n.cval.domain = q >= 0 ? NumDomain::Nat : NumDomain::Int;
  else
    n.cval.domain = NumDomain::Rat;
  n.cval.q = std::move(q);
  return make(std::move(n));
}

Term Term::atom(std::string name, std::string family) {
  TermNode n;
  n.kind = Kind::Atom;
  n.name = std::move(name);
  n.family = std::move(family);
  return make(std::move(n));
}

Term Term::input(std::string name) {
  TermNode n;
  n.kind = Kind::SymInput;
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::var(std::string name, int offset) {
  assert(offset >= 0 && "no references to future time");
  TermNode n;
  n.kind = Kind::VarRef;
  n.name = std::move(name);
  n.offset = offset;
  return make(std::move(n));
}

Term Term::index(Term base, Term idx) {
  TermNode n;
  n.kind = Kind::Index;
  n.kids = {std::move(base), std::move(idx)};
  return make(std::move(n));
}

Term Term::func(std::string name, TermList args) {
  TermNode n;
  n.kind = Kind::FuncApp;
  n.name = std::move(name);
  n.kids = std::move(args);
  return make(std::move(n));
}

Term Term::tuple(TermList elems) {
  TermNode n;
  n.kind = Kind::Tuple;
  n.kids = std::move(elems);
  return make(std::move(n));
}

Term Term::cmp(CmpOp op, Term lhs, Term rhs) {
  TermNode n;
  n.kind = Kind::Compare;
  n.op = static_cast<uint8_t>(op);
  n.kids = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

Term Term::logic(LogicOp op, TermList operands) {
  if (op == LogicOp::Not) {
    assert(operands.size() == 1);
    TermNode n;
    n.kind = Kind::Logic;
    n.op = static_cast<uint8_t>(op);
    n.kids = std::move(operands);
    return make(std::move(n));
  }
  TermList flat;
  flat.reserve(operands.size());
  if (flattenable(op)) {
    for (Term &t : operands) {
      if (t.kind() == Kind::Logic && t.logic_op() == op)
        flat.insert(flat.end(), t.kids().begin(), t.kids().end());
      else
        flat.push_back(std::move(t));
    }
  } else {
    flat = std::move(operands);
  }
  if (commutative(op)) {
    // sequence holes stay rightmost so a flattened pattern keeps its shape
    std::stable_sort(flat.begin(), flat.end(), [](const Term &x, const Term &y) {
      bool sx = x.kind() == Kind::Hole && x.hole_kind() == HoleKind::Sequence;
      bool sy = y.kind() == Kind::Hole && y.hole_kind() == HoleKind::Sequence;
      if (sx != sy) return sy;
      return term_less(x, y);
    });
  }
  if (flattenable(op)) {
    if (flat.empty()) return boolean(op == LogicOp::And);
    if (flat.size() == 1) return flat[0];
  }
  TermNode n;
  n.kind = Kind::Logic;
  n.op = static_cast<uint8_t>(op);
  n.kids = std::move(flat);
  return make(std::move(n));
}

Term Term::arith(ArithOp op, TermList operands) {
  TermList flat;
  flat.reserve(operands.size());
  if (flattenable(op)) {
    for (Term &t : operands) {
      if (t.kind() == Kind::Arith && t.arith_op() == op)
        flat.insert(flat.end(), t.kids().begin(), t.kids().end());
      else
        flat.push_back(std::move(t));
    }
  } else {
    flat = std::move(operands);
  }
  if (commutative(op)) {
    std::stable_sort(flat.begin(), flat.end(), [](const Term &x, const Term &y) {
      bool sx = x.kind() == Kind::Hole && x.hole_kind() == HoleKind::Sequence;
      bool sy = y.kind() == Kind::Hole && y.hole_kind() == HoleKind::Sequence;
      if (sx != sy) return sy;
      return term_less(x, y);
    });
  }
  if (flattenable(op)) {
    if (flat.empty()) return number(Rational(op == ArithOp::Mul ? 1 : 0));
    if (flat.size() == 1) return flat[0];
  }
  TermNode n;
  n.kind = Kind::Arith;
  n.op = static_cast<uint8_t>(op);
  n.kids = std::move(flat);
  return make(std::move(n));
}

Term Term::ite(Term cond, Term then_t, Term else_t) {
  TermNode n;
  n.kind = Kind::If;
  n.kids = {std::move(cond), std::move(then_t), std::move(else_t)};
  return make(std::move(n));
}

Term Term::wildcard() {
  TermNode n;
  n.kind = Kind::Hole;
  n.op = static_cast<uint8_t>(HoleKind::Wildcard);
  return make(std::move(n));
}

Term Term::hole(std::string name) {
  TermNode n;
  n.kind = Kind::Hole;
  n.op = static_cast<uint8_t>(HoleKind::Named);
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::hole_sorted(std::string name, std::string sort_text) {
  TermNode n;
  n.kind = Kind::Hole;
  n.op = static_cast<uint8_t>(HoleKind::Sorted);
  n.name = std::move(name);
  n.family = std::move(sort_text);
  return make(std::move(n));
}

Term Term::seq_hole(std::string name) {
  TermNode n;
  n.kind = Kind::Hole;
  n.op = static_cast<uint8_t>(HoleKind::Sequence);
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::with_kids(TermList new_kids) const {
  const TermNode &n = node();
  assert(new_kids.size() == n.kids.size());
  bool same = true;
  for (size_t i = 0; i < new_kids.size(); ++i)
    if (!new_kids[i].same_node(n.kids[i])) { same = false; break; }
  if (same) return *this;
  switch (n.kind) {
    case Kind::Index: return index(new_kids[0], new_kids[1]);
    case Kind::FuncApp: return func(n.name, std::move(new_kids));
    case Kind::Tuple: return tuple(std::move(new_kids));
    case Kind::Compare: return cmp(static_cast<CmpOp>(n.op), new_kids[0], new_kids[1]);
    case Kind::Logic: return logic(static_cast<LogicOp>(n.op), std::move(new_kids));
    case Kind::Arith: return arith(static_cast<ArithOp>(n.op), std::move(new_kids));
    case Kind::If: return ite(new_kids[0], new_kids[1], new_kids[2]);
    default:
      assert(false && "with_kids on a leaf");
      return *this;
  }
}

uint64_t unique_node_count(const Term &t) {
  std::unordered_set<const TermNode *> seen;
  uint64_t n = 0;
  std::vector<const TermNode *> stack{&t.node()};
  while (!stack.empty()) {
    const TermNode *p = stack.back();
    stack.pop_back();
    if (!seen.insert(p).second) continue;
    ++n;
    for (const Term &k : p->kids) stack.push_back(&k.node());
  }
  return n;
}

uint64_t unique_node_count(const std::vector<Term> &ts) {
  std::unordered_set<const TermNode *> seen;
  uint64_t n = 0;
  std::vector<const TermNode *> stack;
  for (const Term &t : ts)
    if (t) stack.push_back(&t.node());
  while (!stack.empty()) {
    const TermNode *p = stack.back();
    stack.pop_back();
    if (!seen.insert(p).second) continue;
    ++n;
    for (const Term &k : p->kids) stack.push_back(&k.node());
  }
  return n;
}

std::string path_to_string(const TermPath &path) {
  std::string s;
  for (int i : path) {
    s += '.';
    s += std::to_string(i);
  }
  return s.empty() ? std::string("<root>") : s;
}

std::optional<Term> subterm_at(const Term &t, const TermPath &path) {
  Term cur = t;
  for (int i : path) {
    if (i < 0 || static_cast<size_t>(i) >= cur.arity()) return std::nullopt;
    cur = cur.kid(i);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// precedence levels: or < xor < and < not < cmp < add < mul < unary/postfix
int prec_of(const Term &t) {
  switch (t.kind()) {
    case Kind::Logic:
      switch (t.logic_op()) {
        case LogicOp::Or: return 1;
        case LogicOp::Xor: return 2;
        case LogicOp::And: return 3;
        case LogicOp::Not: return 9;   // printed function-style
        default: return 9;             // nor/nand function-style
      }
    case Kind::Compare: return 5;
    case Kind::Arith:
      switch (t.arith_op()) {
        case ArithOp::Add:
        case ArithOp::Sub: return 6;
        case ArithOp::Mul:
        case ArithOp::Div: return 7;
      }
      return 7;
    default: return 10;
  }
}

void print(std::ostream &os, const Term &t, int parent_prec, const PrintOpts &opts) {
  if (t.null()) {
    os << "<null>";
    return;
  }
  int prec = prec_of(t);
  bool paren = prec < parent_prec;
  switch (t.kind()) {
    case Kind::Constant:
      if (t.cval().is_bool) {
        os << (t.cval().b ? "true" : "false");
      } else {
        const Rational &q = t.cval().q;
        if (q < 0) {
          // negative literals parenthesize under an operator context
          if (parent_prec > 0) os << '(' << q << ')';
          else os << q;
        } else {
          os << q;
        }
      }
      return;
    case Kind::Atom:
    case Kind::SymInput:
      os << t.name();
      return;
    case Kind::VarRef:
      os << t.name();
      if (t.offset() == 0) {
        if (!opts.bare_time_zero) os << "(n)";
      } else {
        os << "(n-" << t.offset() << ")";
      }
      return;
    case Kind::Index:
      print(os, t.kid(0), 10, opts);
      os << '[';
      print(os, t.kid(1), 0, opts);
      os << ']';
      return;
    case Kind::FuncApp:
      os << t.name() << '(';
      for (size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ", ";
        print(os, t.kid(i), 0, opts);
      }
      os << ')';
      return;
    case Kind::Tuple:
      os << '[';
      for (size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ", ";
        print(os, t.kid(i), 0, opts);
      }
      os << ']';
      return;
    case Kind::If:
      os << "IF(";
      print(os, t.kid(0), 0, opts);
      os << ", ";
      print(os, t.kid(1), 0, opts);
      os << ", ";
      print(os, t.kid(2), 0, opts);
      os << ')';
      return;
    case Kind::Compare:
      if (paren) os << '(';
      print(os, t.kid(0), prec + 1, opts);
      os << ' ' << to_cstr(t.cmp_op()) << ' ';
      print(os, t.kid(1), prec + 1, opts);
      if (paren) os << ')';
      return;
    case Kind::Logic: {
      LogicOp op = t.logic_op();
      if (op == LogicOp::Not || op == LogicOp::Nor || op == LogicOp::Nand) {
        os << to_cstr(op) << '(';
        for (size_t i = 0; i < t.arity(); ++i) {
          if (i) os << ", ";
          print(os, t.kid(i), 0, opts);
        }
        os << ')';
        return;
      }
      if (paren) os << '(';
      for (size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ' ' << to_cstr(op) << ' ';
        print(os, t.kid(i), prec + 1, opts);
      }
      if (paren) os << ')';
      return;
    }
    case Kind::Arith: {
      ArithOp op = t.arith_op();
      if (paren) os << '(';
      for (size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ' ' << to_cstr(op) << ' ';
        print(os, t.kid(i), prec + 1, opts);
      }
      if (paren) os << ')';
      return;
    }
    case Kind::Hole:
      switch (t.hole_kind()) {
        case HoleKind::Wildcard: os << '_'; return;
        case HoleKind::Named: os << '?' << t.name(); return;
        case HoleKind::Sorted: os << '?' << t.name() << ':' << t.family(); return;
        case HoleKind::Sequence: os << '?' << t.name() << "..."; return;
      }
      return;
  }
}

}  // namespace

std::string to_string(const Term &t) { return to_string(t, PrintOpts{}); }

std::string to_string(const Term &t, const PrintOpts &opts) {
  std::ostringstream os;
  print(os, t, 0, opts);
  return os.str();
}

}  // namespace sre
