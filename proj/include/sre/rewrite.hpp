#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sre/matcher.hpp"
#include "sre/term.hpp"

namespace sre {

// A rewrite rule is either syntactic (pattern => replacement with an optional
// guard on the matched bindings) or a named procedural simplification (an
// action on a node returning the rewritten node, or nothing when it does not
// apply). Procedural rules cover simplifications with no finite rule list,
// e.g. polynomial normal form; an action that would return its input
// unchanged counts as "no match", which keeps fixpoint detection honest.
struct RewriteRule {
  std::string name;
  Term pattern;
  Term replacement;
  std::function<bool(const Bindings &)> guard;              // optional
  std::function<std::optional<Term>(const Term &)> action;  // procedural form

  bool is_procedural() const { return static_cast<bool>(action); }

  static RewriteRule syntactic(Term pattern, Term replacement, std::string name = "");
  static RewriteRule guarded(Term pattern, Term replacement,
                             std::function<bool(const Bindings &)> guard,
                             std::string name = "");
  static RewriteRule procedural(std::string name,
                                std::function<std::optional<Term>(const Term &)> action);
};

struct RuleSet {
  std::string name;
  std::vector<RewriteRule> rules;

  RuleSet() = default;
  explicit RuleSet(std::string n) : name(std::move(n)) {}
  RuleSet &add(RewriteRule r) { rules.push_back(std::move(r)); return *this; }
  RuleSet &concat(const RuleSet &other);
  bool empty() const { return rules.empty(); }
};

// Applies one rule over expr: outermost-first, left-to-right, each matched
// site rewritten once per pass, replacements not revisited within the pass.
Term replace(const Term &expr, const RewriteRule &rule);

// Applies each rule of the set sequentially, each as one full replace pass.
Term replace_list(const Term &expr, const RuleSet &rules);

// Thrown when max_iterations passes do not reach a fixpoint; carries the last
// two terms for diagnosing divergent or oscillating rule sets.
struct NonTermination : std::runtime_error {
  Term previous;
  Term last;
  std::string ruleset;
  NonTermination(Term prev, Term cur, std::string rs);
};

// Repeats replace_list until a pass changes nothing (the fixpoint condition:
// one further pass is the identity), or throws NonTermination.
Term replace_repeated(const Term &expr, const RuleSet &rules,
                      int max_iterations = kDefaultMaxIterations);

// Built-in rule classes:
//   R_Math  — polynomial normal form: expanded sums of monomials over
//             non-arithmetic sub-terms, like terms combined, coefficients
//             reduced, constant folding, subtraction eliminated.
//   R_Logic — boolean simplification: constant folding, double negation,
//             idempotence/complement in flattened and/or, xor pair
//             cancellation, nor/nand expansion, comparison canonicalization
//             and folding.
//   R_IF    — IF distribution over function/operator arguments (guarded
//             against size explosion) followed by IF reduction and condition
//             dominance.
// Unknown names raise std::invalid_argument.
RuleSet builtin_ruleset(const std::string &name);

// Data-word rules parameterized by the function registry: tuple indexing,
// equality expansion over same-length tuples, INVALID_DATA propagation
// through registered functions and indexing, and symbolic expansion of
// registered functions on concrete-enough arguments.
RuleSet data_rules(const FuncRegistry *registry);

// The standard trace simplifier: data rules, then R_IF, R_Logic, R_Math.
RuleSet default_simplifier(const FuncRegistry *registry = nullptr);

// Abstraction mapping an implementation trace onto specification naming:
// trace-variable renames plus term rules eliminating representation
// conversions (e.g. to_frame(?x) => ?x) before comparison.
struct Abstraction {
  std::map<std::string, std::string> rename;  // impl signal -> spec signal
  RuleSet term_rules{"R_Abst"};

  bool trivial() const { return rename.empty() && term_rules.empty(); }
};

// Builds the conversion-elimination rules conv(?x) => ?x for each listed
// function name.
RuleSet conversion_elimination(const std::vector<std::string> &conv_funcs);

Abstraction make_abstraction(std::map<std::string, std::string> rename,
                             RuleSet term_rules);

}  // namespace sre
