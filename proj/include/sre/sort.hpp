#pragma once

#include <map>
#include <memory>
#include <string>

#include "sre/term.hpp"

namespace sre {

// Inferred sort of a term: boolean, numeric(domain), a fixed-width word
// (tuple of element sorts), an enum family, or Any (unconstrained — symbolic
// inputs and uninterpreted function results).
struct Sort {
  enum class Kind { Bool, Num, Word, Enum, Any };
  Kind kind = Kind::Any;
  NumDomain domain = NumDomain::Rat;  // Num
  int length = -1;                    // Word; -1 = unknown length
  std::string family;                 // Enum family name

  static Sort boolean() { return {Kind::Bool, NumDomain::Rat, -1, ""}; }
  static Sort num(NumDomain d = NumDomain::Rat) { return {Kind::Num, d, -1, ""}; }
  static Sort word(int len = -1) { return {Kind::Word, NumDomain::Rat, len, ""}; }
  static Sort enum_family(std::string fam) { return {Kind::Enum, NumDomain::Rat, -1, std::move(fam)}; }
  static Sort any() { return {}; }

  bool is_any() const { return kind == Kind::Any; }
  bool operator==(const Sort &o) const {
    return kind == o.kind && (kind != Kind::Word || length == o.length) &&
           (kind != Kind::Enum || family == o.family);
  }
};

std::string to_string(const Sort &s);

// Whether two sorts can describe the same value (Any unifies with anything;
// unknown-length words unify with any word).
bool sorts_compatible(const Sort &a, const Sort &b);
// The more specific of two compatible sorts.
Sort sort_join(const Sort &a, const Sort &b);

// Declared sorts available during inference. Functions may register a
// signature; unknown functions yield Any results with Any arguments.
struct FuncSort {
  std::vector<Sort> args;  // empty = unchecked arity
  Sort result;
};

struct SortContext {
  std::map<std::string, Sort> vars;       // variable/input/control name -> sort
  std::map<std::string, Sort> sym_inputs; // symbolic input name -> sort (optional)
  std::map<std::string, FuncSort> funcs;  // function name -> signature (optional)
};

struct SortResult {
  Sort sort;
  bool ok = true;
  std::string error;  // first ill-sorted sub-term, human-readable
  TermPath path;      // location of that sub-term

  static SortResult good(Sort s) { return {std::move(s), true, "", {}}; }
  static SortResult bad(std::string msg, TermPath p) {
    return {Sort::any(), false, std::move(msg), std::move(p)};
  }
};

// Total sort inference. Errors pinpoint the first ill-sorted sub-term in
// left-to-right traversal order.
SortResult sort_of(const Term &t, const SortContext &ctx);
SortResult sort_of(const Term &t);  // empty context

}  // namespace sre
