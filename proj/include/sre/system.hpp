#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sre/sort.hpp"
#include "sre/term.hpp"

namespace sre {

// One recurrence equation: target(n) = body, where body references other
// signals at delays gamma >= 0.
struct Equation {
  std::string target;
  Term body;
};

// A system of recurrence equations with declared inputs, controls, and
// outputs. Variables are the equation targets; inputs and controls are
// driven externally per cycle. Initial conditions cover times t <= 0.
struct SreSystem {
  std::string name;
  std::vector<std::string> variables;  // declaration order = dataflow order in bundled models
  std::vector<std::string> inputs;
  std::vector<std::string> controls;
  std::vector<std::string> outputs;
  std::vector<Equation> equations;
  std::map<std::pair<std::string, int>, Term> initial;  // (signal, t<=0) -> constant/symbolic term
  std::map<std::string, Sort> sorts;                    // optional declared sorts
  std::map<std::string, long> attrs;                    // integer attributes (widths, depths)

  bool has_variable(const std::string &x) const;
  bool has_input(const std::string &x) const;
  bool has_control(const std::string &x) const;
  bool declares(const std::string &x) const {
    return has_variable(x) || has_input(x) || has_control(x);
  }
  const Equation *equation_for(const std::string &x) const;
  int max_delay() const;
  SortContext sort_context() const;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
  std::string where;  // "equation X", sub-term path, or declaration site

  bool is_error() const { return severity == Severity::Error; }
};

std::string to_string(const Diagnostic &d);

// Structural well-formedness: one equation per variable, no equation for an
// input/control, references resolve, offsets covered by initial conditions,
// bodies well-sorted. "delay set empty" (a constant body referencing no
// signal) is reported at Warning severity: such equations are degenerate but
// still simulable, and the bug-injection harness creates them deliberately.
std::vector<Diagnostic> validate(const SreSystem &sys);

// True when validate reports no Error-severity diagnostics.
bool well_formed(const SreSystem &sys);

// Exactly the VarRef (name, offset) and SymInput (name, 0) occurrences in t.
// Empty iff t is ground (for hole-free terms).
std::set<std::pair<std::string, int>> free_symbols(const Term &t);
std::set<std::pair<std::string, int>> free_var_refs(const Term &t);
std::set<std::string> free_sym_inputs(const Term &t);

}  // namespace sre
