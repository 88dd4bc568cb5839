#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sre/eval.hpp"
#include "sre/rewrite.hpp"
#include "sre/system.hpp"
#include "sre/term.hpp"

namespace sre {

// A named control scenario: complete control bindings plus integer
// attributes (derived lengths etc.) consumed by property bounds.
struct Scenario {
  std::string name;
  std::map<std::string, Term> bindings;  // control -> constant term
  std::map<std::string, long> attrs;
};

enum class SimMode { Symbolic, Numerical, Mixed };

const char *to_cstr(SimMode m);

struct SimConfig {
  int steps = 1;
  SimMode mode = SimMode::Mixed;
  std::map<std::string, Term> control_bindings;  // required for Numerical/Mixed
  std::map<std::string, Term> input_bindings;    // constants (Numerical) or symbolic terms
  // Optional per-cycle input override: schedule[i] drives the input while
  // computing cycle i+1; shorter schedules fall back to input_bindings.
  std::map<std::string, std::vector<Term>> input_schedule;
  int delta_cycle_limit = kDefaultDeltaCycleLimit;
  int max_iterations = kDefaultMaxIterations;
  const FuncRegistry *funcs = nullptr;
  bool collect_stats = true;

  SimConfig &bind_scenario(const Scenario &sc) {
    for (const auto &[k, v] : sc.bindings) control_bindings[k] = v;
    return *this;
  }
};

struct CycleStats {
  int delta_cycles = 0;
  double wall_ms = 0.0;
  uint64_t node_count = 0;  // unique nodes across the row's bindings
};

// Per-cycle binding of every signal (variables, inputs, controls) to its
// fully simplified term. Row 0 holds the initial conditions at t0; row k
// holds cycle t0+k. Traces are append-only while simulating and immutable
// afterwards.
class Trace {
 public:
  int t0 = 0;
  std::vector<std::map<std::string, Term>> rows;
  std::map<std::pair<std::string, int>, Term> pre;  // bindings at t < t0
  std::vector<CycleStats> stats;                    // stats[k-1] covers row k
  double total_wall_ms = 0.0;
  uint64_t peak_rss_bytes = 0;  // 0 when the platform does not expose it
  uint64_t final_node_count = 0;

  int cycles() const { return static_cast<int>(rows.size()) - 1; }
  // Binding of a signal at row index (0-based from t0); null Term if absent.
  Term binding(const std::string &signal, int row) const;
  const std::map<std::string, Term> *row(int k) const;
};

struct SimError : std::runtime_error {
  enum class Kind { DeltaCycleLimit, UnboundInput, InvalidConfig, NotWellFormed };
  Kind kind;
  std::vector<std::string> signals;  // cyclic variables / unbound inputs
  SimError(Kind k, std::string msg, std::vector<std::string> sigs = {});
};

// One simulation step: computes every variable at the next cycle by
// substituting prior-cycle bindings into its equation body and simplifying
// to fixpoint; zero-delay dependencies are resolved by delta cycles
// (re-evaluate until stable) before time advances.
void sym_sim_step(Trace &state, const SreSystem &sys, const SimConfig &cfg);

// Full run over cfg.steps cycles starting from the system's initial
// conditions. Numerical mode requires every input and control bound to a
// constant and checks that every computed binding folds to a value.
Trace run(const SreSystem &sys, const SimConfig &cfg);

struct TraceOrError {
  std::optional<Trace> trace;
  std::string scenario;
  std::string error;  // empty = success
  bool ok() const { return trace.has_value(); }
};

// Independent runs, one per scenario; per-scenario failures are reported in
// the result list without aborting the batch. jobs > 1 distributes the
// scenarios over a worker pool; results are ordered by scenario index.
std::vector<TraceOrError> run_multi_control(const SreSystem &sys,
                                            const std::vector<Scenario> &scenarios,
                                            const SimConfig &base_cfg, int jobs = 1);

// Substitutes a concrete assignment for the symbolic inputs of a trace and
// folds every binding to constants, yielding the numerical trace the same
// run would have produced on those inputs.
Trace substitute_trace(const Trace &trace, const Assignment &inputs,
                       const FuncRegistry *funcs, int max_iterations = kDefaultMaxIterations);

}  // namespace sre
