#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sre/term.hpp"

namespace sre {

// A concrete runtime value: boolean, exact rational, named symbolic constant
// (enum member / INVALID_DATA), or a finite word of values.
struct Value {
  enum class Tag { Bool, Num, Atom, Tuple };
  Tag tag = Tag::Num;
  bool b = false;
  Rational q;
  std::string atom;    // Atom: name
  std::string family;  // Atom: enum family ("" = free constant)
  std::vector<Value> elems;

  static Value boolean(bool v) { Value x; x.tag = Tag::Bool; x.b = v; return x; }
  static Value num(Rational v) { Value x; x.tag = Tag::Num; x.q = std::move(v); return x; }
  static Value num(long v) { return num(Rational(v)); }
  static Value make_atom(std::string name, std::string fam = "") {
    Value x; x.tag = Tag::Atom; x.atom = std::move(name); x.family = std::move(fam); return x;
  }
  static Value tuple(std::vector<Value> es) {
    Value x; x.tag = Tag::Tuple; x.elems = std::move(es); return x;
  }

  bool is_bool() const { return tag == Tag::Bool; }
  bool is_num() const { return tag == Tag::Num; }
  bool is_atom(const std::string &n) const { return tag == Tag::Atom && atom == n; }
  bool operator==(const Value &o) const;
  bool operator!=(const Value &o) const { return !(*this == o); }
};

std::string to_string(const Value &v);
Term value_to_term(const Value &v);
// Inverse of value_to_term: defined exactly on value terms (constants, atoms,
// tuples of value terms).
std::optional<Value> term_to_value(const Term &t);
bool is_value_term(const Term &t);

// name -> concrete value, used for symbolic-input substitution and witnesses.
using Assignment = std::map<std::string, Value>;

// A named function with a numeric definition (total on its declared inputs;
// nullopt = inapplicable arguments) and an optional symbolic expansion used
// by the data-simplification rules when arguments are concrete enough.
struct FuncDef {
  std::string name;
  int arity = 1;
  std::function<std::optional<Value>(const std::vector<Value> &)> numeric;
  std::function<std::optional<Term>(const TermList &)> symbolic;
};

class FuncRegistry {
 public:
  FuncRegistry &add(FuncDef def);
  const FuncDef *find(const std::string &name) const;
  bool has(const std::string &name) const { return find(name) != nullptr; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, FuncDef> defs_;
};

struct EvalEnv {
  const FuncRegistry *funcs = nullptr;
  const Assignment *inputs = nullptr;  // SymInput name -> Value
  const std::map<std::pair<std::string, int>, Value> *vars = nullptr;  // VarRef -> Value
};

struct EvalResult {
  std::optional<Value> value;
  std::string error;  // division by zero, unbound symbol, unregistered function, sort clash

  bool ok() const { return value.has_value(); }
  static EvalResult good(Value v) { return {std::move(v), ""}; }
  static EvalResult bad(std::string msg) { return {std::nullopt, std::move(msg)}; }
};

// Exact evaluation of a term under an environment. Division by a zero
// denominator is a reported runtime error, never a crash or approximation.
EvalResult eval(const Term &t, const EvalEnv &env);

}  // namespace sre
