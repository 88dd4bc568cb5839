#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sre/eval.hpp"
#include "sre/term.hpp"

namespace sre {

// Patterns are ordinary terms containing Hole nodes:
//   _        wildcard, matches any term
//   ?a       named hole; repeated names must bind structurally equal terms
//   ?a:sort  named hole restricted to a sort tag ("bool", "num", "const",
//            "atom", "tuple", "var")
//   ?a...    sequence hole; matches >= 0 operands of a flattened
//            commutative operator (and/or/xor/+/*) or trailing
//            function/tuple arguments
using Bindings = std::map<std::string, Term>;

struct Mismatch {
  TermPath path;
  Term expected;  // pattern fragment
  Term actual;    // differing sub-term
};

struct MatchOutcome {
  bool matched = false;
  Bindings bindings;
  std::vector<Mismatch> mismatches;  // non-empty iff !matched
};

// Structural match of expr against pattern, modulo the canonical operand
// order of commutative operators (terms are canonicalized at construction).
// Sequence holes and repeated named holes are resolved by backtracking over
// operand subsets; mismatch paths point at the deepest differing nodes found
// on the best-effort failing branch.
MatchOutcome match_q(const Term &expr, const Term &pattern);

// Fast-path match without mismatch diagnostics (used by the rewriter's inner
// loop); bindings are filled only on success.
bool try_match(const Term &expr, const Term &pattern, Bindings &out);

// Replaces holes in pattern by their bound terms. Unbound sequence holes
// vanish; unbound named holes/wildcards are left in place.
Term instantiate(const Term &pattern, const Bindings &bindings);

enum class Equiv { Equal, NotEqual, Unknown };

struct EquivOptions {
  int bool_limit = kExhaustiveBoolLimit;     // exhaustive when <= this many boolean symbols
  int sample_points = kNumericSamplePoints;  // random rational probes otherwise
  uint64_t seed = 0x5eedULL;
  const FuncRegistry *funcs = nullptr;       // needed to evaluate registered FuncApps
  // enum families for enumerating atom-valued symbols, name -> members
  const std::map<std::string, std::vector<std::string>> *families = nullptr;
  int max_iterations = kDefaultMaxIterations;
};

struct EquivResult {
  Equiv verdict = Equiv::Unknown;
  Assignment witness;   // differing assignment when NotEqual
  std::string note;     // why Unknown / which path decided
};

// Decides equivalence of two terms: normalize both under the default
// simplifier; structurally equal normal forms -> Equal. Otherwise evaluate:
// if every free symbol is boolean-valued and there are at most bool_limit of
// them, exhaustively (absolute verdict); else sample random rational points.
// Sampling agreement is reported as Unknown, never upgraded to Equal.
EquivResult equiv_terms(const Term &a, const Term &b, const EquivOptions &opts = {});

class Trace;  // sym-sim

struct ExpectedCheck {
  std::string variable;
  int cycle = 0;  // trace row index (0 = initial conditions)
  Term pattern;
};

struct ExpectedOutcome {
  MatchOutcome outcome;
  std::string error;  // unknown variable / cycle out of range
  bool ok() const { return error.empty(); }
};

// One outcome per check, order preserved; per-check errors never abort the
// batch.
std::vector<ExpectedOutcome> verify_expected(const Trace &trace,
                                             const std::vector<ExpectedCheck> &checks);

}  // namespace sre
