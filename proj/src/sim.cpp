#include "sre/sim.hpp"

#include <chrono>

#include "sre/parallel.hpp"

namespace sre {

uint64_t peak_rss_bytes();  // report.cpp

const char *to_cstr(SimMode m) {
  switch (m) {
    case SimMode::Symbolic: return "symbolic";
    case SimMode::Numerical: return "numerical";
    case SimMode::Mixed: return "mixed";
  }
  return "?";
}

Term Trace::binding(const std::string &signal, int row_idx) const {
  if (row_idx < 0 || row_idx >= static_cast<int>(rows.size())) return Term();
  auto it = rows[static_cast<size_t>(row_idx)].find(signal);
  return it == rows[static_cast<size_t>(row_idx)].end() ? Term() : it->second;
}

const std::map<std::string, Term> *Trace::row(int k) const {
  if (k < 0 || k >= static_cast<int>(rows.size())) return nullptr;
  return &rows[static_cast<size_t>(k)];
}

SimError::SimError(Kind k, std::string msg, std::vector<std::string> sigs)
    : std::runtime_error(std::move(msg)), kind(k), signals(std::move(sigs)) {}

namespace {

struct CycleEnv {
  const SreSystem &sys;
  const SimConfig &cfg;
  const Trace &trace;
  int t;  // absolute time of the row being computed
  std::map<std::string, Term> io;         // this cycle's input/control bindings
  std::map<std::string, Term> estimates;  // zero-delay variable estimates

  // Substitute time-indexed references: zero-delay variables from the current
  // estimates (left in place while still unknown), delayed references from
  // completed rows / initial conditions, inputs and controls from io.
  Term subst(const Term &b) {
    if (b.null() || b.ground()) return b;
    if (b.kind() == Kind::VarRef) {
      const std::string &x = b.name();
      int gamma = b.offset();
      if (sys.has_control(x)) {
        auto it = io.find(x);
        return it != io.end() ? it->second : b;
      }
      if (gamma == 0) {
        if (sys.has_input(x)) {
          auto it = io.find(x);
          return it != io.end() ? it->second : b;
        }
        auto it = estimates.find(x);
        return it != estimates.end() ? it->second : b;
      }
      int tau = t - gamma;
      if (tau >= trace.t0) {
        Term v = trace.binding(x, tau - trace.t0);
        return v.null() ? b : v;
      }
      auto it = trace.pre.find({x, tau - trace.t0});
      return it != trace.pre.end() ? it->second : b;
    }
    if (b.arity() == 0) return b;
    TermList kids;
    kids.reserve(b.arity());
    bool changed = false;
    for (const Term &k : b.kids()) {
      Term nk = subst(k);
      if (!nk.same_node(k)) changed = true;
      kids.push_back(std::move(nk));
    }
    return changed ? b.with_kids(std::move(kids)) : b;
  }
};

void collect_zero_delay_refs(const Term &t, const SreSystem &sys,
                             std::vector<std::string> &out) {
  if (t.null() || t.ground()) return;
  if (t.kind() == Kind::VarRef && t.offset() == 0 && sys.has_variable(t.name())) {
    out.push_back(t.name());
    return;
  }
  for (const Term &k : t.kids()) collect_zero_delay_refs(k, sys, out);
}

}  // namespace

void sym_sim_step(Trace &state, const SreSystem &sys, const SimConfig &cfg) {
  auto started = std::chrono::steady_clock::now();
  int k = static_cast<int>(state.rows.size());  // the row index being produced
  CycleEnv env{sys, cfg, state, state.t0 + k, {}, {}};

  // resolve this cycle's inputs: schedule entry, then the run-wide binding,
  // then a free symbol (symbolic modes only)
  std::vector<std::string> unbound;
  for (const std::string &in : sys.inputs) {
    auto sched = cfg.input_schedule.find(in);
    if (sched != cfg.input_schedule.end() &&
        static_cast<size_t>(k - 1) < sched->second.size()) {
      env.io[in] = sched->second[static_cast<size_t>(k - 1)];
      continue;
    }
    auto it = cfg.input_bindings.find(in);
    if (it != cfg.input_bindings.end()) {
      env.io[in] = it->second;
      continue;
    }
    if (cfg.mode == SimMode::Numerical)
      unbound.push_back(in);
    else
      env.io[in] = Term::input(in);
  }
  for (const std::string &c : sys.controls) {
    auto it = cfg.control_bindings.find(c);
    if (it != cfg.control_bindings.end()) {
      env.io[c] = it->second;
      continue;
    }
    if (cfg.mode == SimMode::Symbolic)
      env.io[c] = Term::input(c);
    else
      unbound.push_back(c);
  }
  if (!unbound.empty()) {
    std::string msg = "unbound signals in " + std::string(to_cstr(cfg.mode)) + " mode:";
    for (const std::string &s : unbound) msg += " " + s;
    throw SimError(SimError::Kind::UnboundInput, msg, unbound);
  }

  RuleSet simp = default_simplifier(cfg.funcs);
  std::map<std::string, Term> last_subst;
  int delta = 0;
  std::vector<std::string> changed_vars;
  while (true) {
    if (delta >= cfg.delta_cycle_limit) {
      throw SimError(SimError::Kind::DeltaCycleLimit,
                     "no stable assignment within " +
                         std::to_string(cfg.delta_cycle_limit) + " delta cycles at cycle " +
                         std::to_string(env.t),
                     changed_vars);
    }
    ++delta;
    changed_vars.clear();
    for (const Equation &eq : sys.equations) {
      Term body = env.subst(eq.body);
      auto ls = last_subst.find(eq.target);
      if (ls != last_subst.end() && term_equal(ls->second, body)) continue;
      last_subst[eq.target] = body;
      Term simplified = replace_repeated(body, simp, cfg.max_iterations);
      auto est = env.estimates.find(eq.target);
      if (est == env.estimates.end() || !term_equal(est->second, simplified)) {
        env.estimates[eq.target] = simplified;
        changed_vars.push_back(eq.target);
      }
    }
    if (changed_vars.empty()) break;
  }

  // a stable row may still contain zero-delay references that never resolved
  std::vector<std::string> cyclic;
  for (const auto &[name, term] : env.estimates) {
    std::vector<std::string> refs;
    collect_zero_delay_refs(term, sys, refs);
    if (!refs.empty()) cyclic.push_back(name);
  }
  if (!cyclic.empty()) {
    std::string msg = "combinational cycle: unresolved zero-delay references in";
    for (const std::string &s : cyclic) msg += " " + s;
    throw SimError(SimError::Kind::DeltaCycleLimit, msg, cyclic);
  }

  if (cfg.mode == SimMode::Numerical) {
    std::vector<std::string> symbolic_left;
    for (const auto &[name, term] : env.estimates)
      if (!is_value_term(term)) symbolic_left.push_back(name);
    if (!symbolic_left.empty()) {
      std::string msg = "numerical run left non-constant bindings:";
      for (const std::string &s : symbolic_left) msg += " " + s;
      throw SimError(SimError::Kind::InvalidConfig, msg, symbolic_left);
    }
  }

  std::map<std::string, Term> row = env.io;
  for (auto &[name, term] : env.estimates) row[name] = term;
  state.rows.push_back(std::move(row));

  if (cfg.collect_stats) {
    CycleStats cs;
    cs.delta_cycles = delta;
    std::vector<Term> terms;
    for (const auto &[name, term] : state.rows.back()) terms.push_back(term);
    cs.node_count = unique_node_count(terms);
    cs.wall_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - started)
                     .count();
    state.stats.push_back(cs);
  }
}

Trace run(const SreSystem &sys, const SimConfig &cfg) {
  auto started = std::chrono::steady_clock::now();
  if (cfg.steps < 0)
    throw SimError(SimError::Kind::InvalidConfig, "negative step count");
  std::vector<Diagnostic> diags = validate(sys);
  std::vector<std::string> errs;
  for (const Diagnostic &d : diags)
    if (d.severity == Diagnostic::Severity::Error) errs.push_back(d.message);
  if (!errs.empty()) {
    std::string msg = "system " + sys.name + " is not well-formed:";
    for (const std::string &e : errs) msg += "\n  " + e;
    throw SimError(SimError::Kind::NotWellFormed, msg, errs);
  }

  Trace tr;
  tr.t0 = 0;
  std::map<std::string, Term> row0;
  for (const auto &[key, term] : sys.initial) {
    if (key.second == 0)
      row0[key.first] = term;
    else
      tr.pre[key] = term;
  }
  tr.rows.push_back(std::move(row0));

  for (int k = 1; k <= cfg.steps; ++k) sym_sim_step(tr, sys, cfg);

  std::vector<Term> last;
  for (const auto &[name, term] : tr.rows.back()) last.push_back(term);
  tr.final_node_count = unique_node_count(last);
  tr.peak_rss_bytes = peak_rss_bytes();
  tr.total_wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return tr;
}

std::vector<TraceOrError> run_multi_control(const SreSystem &sys,
                                            const std::vector<Scenario> &scenarios,
                                            const SimConfig &base_cfg, int jobs) {
  std::vector<TraceOrError> out(scenarios.size());
  par_for(scenarios.size(), jobs, [&](size_t i) {
    out[i].scenario = scenarios[i].name;
    try {
      SimConfig cfg = base_cfg;
      cfg.bind_scenario(scenarios[i]);
      out[i].trace = run(sys, cfg);
    } catch (const std::exception &e) {
      out[i].error = e.what();
    }
  });
  return out;
}

namespace {

Term subst_inputs(const Term &t, const Assignment &inputs) {
  if (t.null() || t.ground()) return t;
  if (t.kind() == Kind::SymInput) {
    auto it = inputs.find(t.name());
    return it != inputs.end() ? value_to_term(it->second) : t;
  }
  if (t.arity() == 0) return t;
  TermList kids;
  kids.reserve(t.arity());
  bool changed = false;
  for (const Term &k : t.kids()) {
    Term nk = subst_inputs(k, inputs);
    if (!nk.same_node(k)) changed = true;
    kids.push_back(std::move(nk));
  }
  return changed ? t.with_kids(std::move(kids)) : t;
}

}  // namespace

Trace substitute_trace(const Trace &trace, const Assignment &inputs,
                       const FuncRegistry *funcs, int max_iterations) {
  Trace out;
  out.t0 = trace.t0;
  RuleSet simp = default_simplifier(funcs);
  EvalEnv env;
  env.funcs = funcs;
  env.inputs = &inputs;
  // direct evaluation grounds most bindings in one pass; terms it cannot
  // fold (residual symbols, functions without numeric definitions) go
  // through the rewriting simplifier instead
  auto fold = [&](const Term &term) {
    EvalResult r = eval(term, env);
    if (r.ok()) return value_to_term(*r.value);
    return replace_repeated(subst_inputs(term, inputs), simp, max_iterations);
  };
  for (const auto &row : trace.rows) {
    std::map<std::string, Term> nrow;
    for (const auto &[name, term] : row) nrow[name] = fold(term);
    out.rows.push_back(std::move(nrow));
  }
  for (const auto &[key, term] : trace.pre) out.pre[key] = fold(term);
  if (!out.rows.empty()) {
    std::vector<Term> last;
    for (const auto &[name, term] : out.rows.back()) last.push_back(term);
    out.final_node_count = unique_node_count(last);
  }
  return out;
}

}  // namespace sre
