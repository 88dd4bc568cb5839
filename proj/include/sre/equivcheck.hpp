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

// Computational-equivalence job: simulate the specification system k_spec
// steps and the implementation k_imp steps under identical symbolic inputs
// per scenario, abstract the implementation trace onto specification naming,
// and compare corresponding signals at the final cycle.
struct EquivJob {
  std::string name;
  const SreSystem *spec = nullptr;
  const SreSystem *impl = nullptr;
  int k_spec = 1;
  int k_imp = 1;
  Abstraction abstraction;
  std::vector<Scenario> scenarios;
  // (spec signal, impl signal) pairs compared at T. Empty = defaults: every
  // spec variable whose name appears in the abstracted impl trace, which
  // must at least cover the declared spec outputs.
  std::vector<std::pair<std::string, std::string>> compare_vars;
  // Shared stimulus: symbolic input bindings injected into both systems by
  // input name.
  std::map<std::string, Term> input_bindings;
  const FuncRegistry *funcs = nullptr;
  int jobs = 1;
  int delta_cycle_limit = kDefaultDeltaCycleLimit;
  int max_iterations = kDefaultMaxIterations;
  EquivOptions equiv;
};

struct VarOutcome {
  std::string scenario;
  std::string spec_var;
  std::string impl_var;
  Equiv verdict = Equiv::Equal;
  Assignment witness;  // when NotEqual
  std::string note;
  Term spec_term;
  Term impl_term;
};

enum class EquivOverall { Equivalent, NotEquivalent, Error };

const char *to_cstr(EquivOverall o);

struct ScenarioEquivResult {
  std::string scenario;
  std::string error;  // simulation/config failure for this scenario
  std::vector<VarOutcome> outcomes;
  double wall_ms = 0.0;
  uint64_t node_count = 0;
};

struct EquivVerdict {
  std::string job;
  EquivOverall overall = EquivOverall::Equivalent;  // Equivalent iff every outcome Equal
  bool has_unknown = false;  // some outcome undecided (counted as not equivalent, flagged)
  std::vector<ScenarioEquivResult> scenarios;
  double wall_ms = 0.0;
  uint64_t peak_rss_bytes = 0;

  std::vector<const VarOutcome *> mismatches() const;
};

struct CorrespondenceGap : std::runtime_error {
  std::vector<std::string> missing;  // spec signals without an impl counterpart
  explicit CorrespondenceGap(std::vector<std::string> m);
};

// Runs the job. Scenario failures are contained per scenario; a compared
// spec output signal with no counterpart in the abstracted implementation
// trace raises CorrespondenceGap before any simulation starts.
EquivVerdict check_equivalence(const EquivJob &job);

// Localization of a NotEquivalent verdict: groups mismatched signals by
// block prefix ("block.signal" naming) and by scenario, smallest grouping
// first. The suspected origin is the earliest mismatching block in the
// specification's declaration (dataflow) order.
struct Localization {
  struct Group {
    std::string block;
    std::vector<std::string> signals;
    std::vector<std::string> scenarios;  // modes where the mismatch shows
  };
  std::vector<Group> groups;      // ordered by dataflow position
  std::string suspected_block;    // groups.front().block when present
  std::vector<std::string> suspected_scenarios;
  bool low_confidence = false;    // mismatches span every block
};

Localization localize(const EquivVerdict &verdict, const SreSystem &spec);

}  // namespace sre
