#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sre/matcher.hpp"
#include "sre/rewrite.hpp"
#include "sre/sim.hpp"
#include "sre/system.hpp"

namespace sre {

// A bounded-horizon property over a trace: a boolean term whose variable
// references name trace signals (offset = cycles before the check cycle),
// optionally universally quantified over a finite index range. "Eventually"
// properties are read against the designated completion cycle of a bounded
// trace, so every property carries its own horizon.
struct Property {
  enum class Category { Global, Local, Control };
  std::string name;
  Category category = Category::Global;
  Term body;  // boolean-sorted; quantifier index appears as a symbolic input
  struct Quantifier {
    std::string index;  // bound index name
    Term lo, hi;        // inclusive bounds; may reference integer attributes
  };
  std::optional<Quantifier> quant;
  // Applies only to scenarios where this control is bound to this value
  // (e.g. the per-code-rate clauses of a puncturing property).
  struct Guard {
    std::string control;
    Term value;
  };
  std::optional<Guard> guard;
  int horizon = 1;  // trace length checked (cycles)
};

const char *to_cstr(Property::Category c);

struct Counterexample {
  std::string property;
  std::string scenario;
  std::string signal;          // offending signal
  std::optional<long> index;   // quantifier instance, when quantified
  std::string value_text;      // the wrong signal value (symbolic or concrete)
  Assignment witness;          // input assignment exhibiting the violation
  Term failed_term;            // instantiated condition that does not hold
};

enum class PropOutcome { Holds, Fails, Unproven, Error };

const char *to_cstr(PropOutcome o);

struct ScenarioPropResult {
  std::string scenario;
  PropOutcome outcome = PropOutcome::Holds;
  bool skipped = false;  // guard excluded this scenario
  std::optional<Counterexample> counterexample;
  std::string note;      // residual term for Unproven, error text for Error
  double wall_ms = 0.0;
  uint64_t node_count = 0;
};

struct PropVerdict {
  std::string property;
  std::string model;
  PropOutcome outcome = PropOutcome::Holds;  // worst over applicable scenarios
  std::vector<ScenarioPropResult> scenarios;
  std::optional<Counterexample> counterexample;  // first failure
  double wall_ms = 0.0;
};

struct CheckOptions {
  const FuncRegistry *funcs = nullptr;
  const Abstraction *abstraction = nullptr;  // applied to the trace before checking
  std::map<std::string, Term> input_bindings;  // symbolic words fed to the model
  int delta_cycle_limit = kDefaultDeltaCycleLimit;
  int max_iterations = kDefaultMaxIterations;
  int jobs = 1;
  EquivOptions equiv;
};

// Checks one property against one model across the scenarios: per scenario,
// simulate prop.horizon cycles in mixed mode, abstract the trace, substitute
// trace bindings into the property body (expanding the quantifier into its
// finite instances), and decide each instance. The first failing instance
// becomes the counterexample. Unknown decisions yield Unproven with the
// residual attached, never a silent pass or fail.
PropVerdict check_property(const SreSystem &impl, const Property &prop,
                           const std::vector<Scenario> &scenarios,
                           const CheckOptions &opts);

struct SuiteModel {
  std::string name;
  const SreSystem *system = nullptr;
  const Abstraction *abstraction = nullptr;
  std::map<std::string, Term> input_bindings;
};

struct SuiteCell {
  std::string model;
  std::string property;
  std::string scenario_set;
  PropVerdict verdict;
};

// Cross product of models x properties x scenario sets; cells run
// independently (parallel across cells when opts.jobs > 1) and cell errors
// are contained in the cell verdict.
std::vector<SuiteCell> property_suite(
    const std::vector<SuiteModel> &models, const std::vector<Property> &properties,
    const std::vector<std::pair<std::string, std::vector<Scenario>>> &scenario_sets,
    const CheckOptions &opts);

// Numerically replays a counterexample against the model: simulates the
// witness assignment under the counterexample's scenario and re-evaluates
// the failed condition. True when the violation reproduces (the condition
// evaluates to false).
bool replay_counterexample(const SreSystem &impl, const Property &prop,
                           const Counterexample &ce, const std::vector<Scenario> &scenarios,
                           const CheckOptions &opts);

}  // namespace sre
