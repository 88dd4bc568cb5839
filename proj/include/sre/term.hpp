#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sre {

using Rational = boost::multiprecision::cpp_rational;

// Default engine limits. Overridable per call; the CLI also honors
// SRE_MAX_ITERATIONS / SRE_DELTA_CYCLE_LIMIT environment caps.
inline constexpr int kDefaultMaxIterations = 10000;
inline constexpr int kDefaultDeltaCycleLimit = 100;
inline constexpr int kExhaustiveBoolLimit = 16;   // B: exhaustive boolean domain bound
inline constexpr int kNumericSamplePoints = 64;   // S: random rational sample count
inline constexpr uint64_t kDistributeSizeLimit = 128;  // IF distribution node-count guard

enum class Kind : uint8_t {
  Constant,
  Atom,      // named symbolic constant (enum member or free constant like INVALID_DATA)
  SymInput,  // free symbolic value injected by simulation
  VarRef,    // X(n - offset)
  Index,     // tuple indexing t[i]
  FuncApp,
  Tuple,
  Compare,
  Logic,
  Arith,
  If,
  Hole,      // pattern-only: wildcard / named / sorted / sequence
};

enum class ArithOp : uint8_t { Add, Sub, Mul, Div };
enum class LogicOp : uint8_t { Not, And, Or, Xor, Nor, Nand };
enum class CmpOp : uint8_t { Eq, Ne, Lt, Le, Gt, Ge };
enum class HoleKind : uint8_t { Wildcard, Named, Sorted, Sequence };
enum class NumDomain : uint8_t { Nat, Int, Rat };

const char *to_cstr(ArithOp op);
const char *to_cstr(LogicOp op);
const char *to_cstr(CmpOp op);

struct ConstVal {
  bool is_bool = false;
  bool b = false;
  Rational q;
  NumDomain domain = NumDomain::Rat;
};

class Term;
using TermList = std::vector<Term>;

struct TermNode {
  Kind kind;
  uint8_t op = 0;        // ArithOp / LogicOp / CmpOp / HoleKind
  int offset = 0;        // VarRef delay
  ConstVal cval;         // Constant payload
  std::string name;      // Atom / SymInput / VarRef / FuncApp / Hole
  std::string family;    // Atom: enum family ("" = free constant); Hole: sort annotation
  TermList kids;
  uint64_t hash = 0;
  uint64_t node_count = 1;
  bool ground = true;    // no VarRef / SymInput / Hole in subtree
  bool with_hole = false;
};

// Immutable shared expression tree. Commutative-associative operators
// (+, *, and, or, xor) are flattened and operand-sorted at construction,
// so structurally equal terms are equal modulo commutativity.
class Term {
 public:
  Term() = default;

  static Term boolean(bool v);
  static Term number(Rational q);
  static Term number(long n) { return number(Rational(n)); }
  static Term atom(std::string name, std::string family = "");
  static Term input(std::string name);
  static Term var(std::string name, int offset);
  static Term index(Term base, Term idx);
  static Term func(std::string name, TermList args);
  static Term tuple(TermList elems);
  static Term cmp(CmpOp op, Term lhs, Term rhs);
  static Term logic(LogicOp op, TermList operands);
  static Term arith(ArithOp op, TermList operands);
  static Term ite(Term cond, Term then_t, Term else_t);
  static Term wildcard();
  static Term hole(std::string name);
  static Term hole_sorted(std::string name, std::string sort_text);
  static Term seq_hole(std::string name);

  // conveniences used throughout the engine and tests
  static Term add(TermList xs) { return arith(ArithOp::Add, std::move(xs)); }
  static Term mul(TermList xs) { return arith(ArithOp::Mul, std::move(xs)); }
  static Term land(TermList xs) { return logic(LogicOp::And, std::move(xs)); }
  static Term lor(TermList xs) { return logic(LogicOp::Or, std::move(xs)); }
  static Term lxor(TermList xs) { return logic(LogicOp::Xor, std::move(xs)); }
  static Term lnot(Term x) { return logic(LogicOp::Not, {std::move(x)}); }

  bool null() const { return !p_; }
  const TermNode &node() const { return *p_; }
  Kind kind() const { return p_->kind; }
  uint64_t hash() const { return p_->hash; }
  uint64_t node_count() const { return p_->node_count; }
  bool ground() const { return p_->ground; }
  bool with_hole() const { return p_->with_hole; }
  const std::string &name() const { return p_->name; }
  const std::string &family() const { return p_->family; }
  int offset() const { return p_->offset; }
  const ConstVal &cval() const { return p_->cval; }
  const TermList &kids() const { return p_->kids; }
  size_t arity() const { return p_->kids.size(); }
  const Term &kid(size_t i) const { return p_->kids[i]; }

  ArithOp arith_op() const { return static_cast<ArithOp>(p_->op); }
  LogicOp logic_op() const { return static_cast<LogicOp>(p_->op); }
  CmpOp cmp_op() const { return static_cast<CmpOp>(p_->op); }
  HoleKind hole_kind() const { return static_cast<HoleKind>(p_->op); }

  bool is_const() const { return p_ && p_->kind == Kind::Constant; }
  bool is_bool_const() const { return is_const() && p_->cval.is_bool; }
  bool is_num_const() const { return is_const() && !p_->cval.is_bool; }
  bool is_true() const { return is_bool_const() && p_->cval.b; }
  bool is_false() const { return is_bool_const() && !p_->cval.b; }
  bool is_atom(const std::string &n) const { return p_ && p_->kind == Kind::Atom && p_->name == n; }
  bool same_node(const Term &o) const { return p_ == o.p_; }

  // Rebuild this node with new children (same payload). Returns *this when
  // every child is pointer-identical, preserving sharing.
  Term with_kids(TermList new_kids) const;

  explicit operator bool() const { return static_cast<bool>(p_); }

 private:
  static Term make(TermNode &&n);
  std::shared_ptr<const TermNode> p_;
};

// Deterministic total order: constants < atoms < symbolic inputs < variable
// references < compound terms; ties broken structurally. Used for canonical
// operand ordering, so it must never depend on addresses.
int term_compare(const Term &a, const Term &b);
bool term_equal(const Term &a, const Term &b);
bool term_less(const Term &a, const Term &b);

// Number of distinct nodes reachable through shared structure.
uint64_t unique_node_count(const Term &t);
uint64_t unique_node_count(const std::vector<Term> &ts);

// Child path into a term, for diagnostics and mismatch reporting.
using TermPath = std::vector<int>;
std::string path_to_string(const TermPath &path);
std::optional<Term> subterm_at(const Term &t, const TermPath &path);

// Canonical one-line rendering in the DSL term syntax. VarRef(x, 0) prints
// as "x(n)" unless bare_time_zero is set (property bodies print "x").
struct PrintOpts {
  bool bare_time_zero = false;
};
std::string to_string(const Term &t);
std::string to_string(const Term &t, const PrintOpts &opts);

}  // namespace sre
