// Command-line front end: validate / simulate / equiv / check / bench /
// emit-models over recurrence-equation models. Exit codes: 0 pass, 1 negative
// verdict, 2 usage or input error, 3 internal limit reached.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "sre/dsl.hpp"
#include "sre/equivcheck.hpp"
#include "sre/parallel.hpp"
#include "sre/propcheck.hpp"
#include "sre/report.hpp"
#include "sre/wimax.hpp"

using namespace sre;
using nlohmann::json;

namespace {

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string &msg) : std::runtime_error(msg), code(c) {}
};

int env_int(const char *name, int fallback) {
  const char *v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    return std::stoi(v);
  } catch (...) {
    throw CliError(2, std::string(name) + " is not an integer: " + v);
  }
}

int g_max_iterations = kDefaultMaxIterations;
int g_delta_cycle_limit = kDefaultDeltaCycleLimit;

std::string read_file(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliError(2, "cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// ---------------------------------------------------------------------------
// parsed-file workspace
// ---------------------------------------------------------------------------

struct Workspace {
  DeclEnv env;
  std::vector<SourceUnit> units;

  const SreSystem *find_system(const std::string &name) const {
    for (const SourceUnit &u : units)
      for (const SreSystem &s : u.systems)
        if (s.name == name) return &s;
    return nullptr;
  }
  const RulesetDecl *find_ruleset(const std::string &name) const {
    for (const SourceUnit &u : units)
      for (const RulesetDecl &r : u.rulesets)
        if (r.name == name) return &r;
    return nullptr;
  }
  const JobDecl *find_job(const std::string &name) const {
    for (const SourceUnit &u : units)
      for (const JobDecl &j : u.jobs)
        if (j.name == name) return &j;
    return nullptr;
  }
  std::vector<Scenario> scenarios() const {
    std::vector<Scenario> out;
    for (const SourceUnit &u : units)
      for (const Scenario &sc : u.scenarios)
        if (std::none_of(out.begin(), out.end(),
                         [&](const Scenario &x) { return x.name == sc.name; }))
          out.push_back(sc);
    return out;
  }
  std::vector<const Property *> properties() const {
    std::vector<const Property *> out;
    for (const SourceUnit &u : units)
      for (const Property &p : u.properties) out.push_back(&p);
    return out;
  }
};

Workspace load_files(const std::vector<std::string> &paths) {
  Workspace ws;
  std::vector<std::string> texts;
  for (const std::string &p : paths) texts.push_back(read_file(p));
  ws.env = collect_decl_env_files(texts);
  for (size_t i = 0; i < paths.size(); ++i) {
    ParseResult r = parse_unit(texts[i], paths[i], &ws.env);
    if (!r.ok()) {
      for (const ParseDiag &d : r.diags)
        std::cerr << paths[i] << ":" << to_string(d) << "\n";
      throw CliError(2, "parse failed: " + paths[i]);
    }
    ws.units.push_back(std::move(*r.unit));
  }
  return ws;
}

// ---------------------------------------------------------------------------
// model resolution (files first, bundled transmitter levels as fallback)
// ---------------------------------------------------------------------------

struct ResolvedModel {
  SreSystem system;
  std::optional<WimaxLevel> level;
};

ResolvedModel resolve_model(const Workspace &ws, const std::string &name, int width) {
  std::optional<WimaxLevel> level = wimax_level_from(name);
  if (const SreSystem *s = ws.find_system(name)) return {*s, wimax_level_from(s->name)};
  if (level) return {build_model(*level, width), level};
  throw CliError(2, "unknown system '" + name + "' (not in the given files, not a bundled level)");
}

std::map<std::string, Term> default_symbolic_inputs(const SreSystem &sys) {
  std::map<std::string, Term> out;
  int word_inputs = 0;
  for (const std::string &in : sys.inputs) {
    auto it = sys.sorts.find(in);
    if (it != sys.sorts.end() && it->second.kind == Sort::Kind::Word && it->second.length > 0)
      ++word_inputs;
  }
  for (const std::string &in : sys.inputs) {
    auto it = sys.sorts.find(in);
    if (it != sys.sorts.end() && it->second.kind == Sort::Kind::Word && it->second.length > 0) {
      TermList bits;
      for (int i = 0; i < it->second.length; ++i) {
        std::string bit = word_inputs == 1 ? "b" + std::to_string(i)
                                           : in + ".b" + std::to_string(i);
        bits.push_back(Term::input(bit));
      }
      out[in] = Term::tuple(std::move(bits));
    } else {
      out[in] = Term::input(in);
    }
  }
  return out;
}

// a scenario can drive a system only when every signal it binds is one of
// the system's declared controls or inputs
bool scenario_applies(const Scenario &sc, const SreSystem &sys) {
  for (const auto &[signal, term] : sc.bindings) {
    bool known =
        std::find(sys.controls.begin(), sys.controls.end(), signal) != sys.controls.end() ||
        std::find(sys.inputs.begin(), sys.inputs.end(), signal) != sys.inputs.end();
    if (!known) return false;
  }
  return true;
}

std::vector<Scenario> resolve_scenarios(const Workspace &ws, int width,
                                        const std::vector<std::string> &names,
                                        const std::vector<const SreSystem *> &subjects = {}) {
  std::vector<Scenario> pool = ws.scenarios();
  if (pool.empty()) pool = all_scenarios(width);
  if (!names.empty()) {
    // explicitly named scenarios are taken as given, applicable or not
    std::vector<Scenario> out;
    for (const std::string &n : names) {
      auto it = std::find_if(pool.begin(), pool.end(),
                             [&](const Scenario &s) { return s.name == n; });
      if (it == pool.end()) throw CliError(2, "unknown scenario '" + n + "'");
      out.push_back(*it);
    }
    return out;
  }
  if (subjects.empty()) return pool;
  std::vector<Scenario> out;
  for (const Scenario &sc : pool) {
    bool ok = true;
    for (const SreSystem *s : subjects) ok = ok && scenario_applies(sc, *s);
    if (ok) out.push_back(sc);
  }
  if (out.empty()) {
    // nothing declared drives this system; run unconstrained when there are
    // no control signals demanding a binding
    bool any_controls = false;
    for (const SreSystem *s : subjects) any_controls = any_controls || !s->controls.empty();
    if (!any_controls) {
      Scenario none;
      none.name = "default";
      return {none};
    }
    throw CliError(2, "no declared scenario binds the controls of the selected system");
  }
  return out;
}

SreSystem apply_bug(const ResolvedModel &m, const std::string &bug) {
  if (bug.empty()) return m.system;
  if (!m.level)
    throw CliError(2, "--bug needs a bundled transmitter level (fl/ptl8/ptl4 naming)");
  InjectResult r = inject(m.system, *m.level, bug);
  std::cerr << "injected " << bug << " at " << r.site << "\n";
  return r.model;
}

std::vector<std::string> split_csv(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const std::vector<std::string> &files, const std::string &out_path) {
  double t0 = now_ms();
  Workspace ws = load_files(files);
  bool any_error = false;
  json systems = json::array();
  for (const SourceUnit &u : ws.units)
    for (const SreSystem &sys : u.systems) {
      std::vector<Diagnostic> diags = validate(sys);
      json js;
      js["system"] = sys.name;
      js["file"] = u.path;
      json jd = json::array();
      for (const Diagnostic &d : diags) {
        jd.push_back(to_string(d));
        std::cerr << sys.name << ": " << to_string(d) << "\n";
        if (d.is_error()) any_error = true;
      }
      js["diagnostics"] = std::move(jd);
      systems.push_back(std::move(js));
    }
  PhaseTimer timer;
  timer.record("parse_and_validate", now_ms() - t0);
  json body;
  body["systems"] = std::move(systems);
  body["verdict"] = any_error ? "invalid" : "valid";
  emit_report(make_report("validate", json(files), body, timer.phases), out_path);
  return any_error ? 1 : 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const std::vector<std::string> &files, const std::string &system_name,
                 const std::string &scenario_name, int steps, int width,
                 const std::string &word_bits, const std::string &bug,
                 const std::string &out_path) {
  PhaseTimer timer;
  double t0 = now_ms();
  Workspace ws = load_files(files);
  std::string name = system_name.empty() && !ws.units.empty() && !ws.units[0].systems.empty()
                         ? ws.units[0].systems[0].name
                         : system_name;
  if (name.empty()) name = "wimax_fl";
  ResolvedModel model = resolve_model(ws, name, width);
  SreSystem sys = apply_bug(model, bug);
  timer.record("parse", now_ms() - t0);

  std::vector<Scenario> scenarios =
      resolve_scenarios(ws, width,
                        scenario_name.empty() ? std::vector<std::string>{}
                                              : std::vector<std::string>{scenario_name},
                        {&sys});
  Scenario sc = scenarios.front();

  SimConfig cfg;
  cfg.steps = steps;
  cfg.funcs = &wimax_registry();
  cfg.max_iterations = g_max_iterations;
  cfg.delta_cycle_limit = g_delta_cycle_limit;
  cfg.bind_scenario(sc);
  if (!word_bits.empty()) {
    std::vector<bool> bits;
    for (char c : word_bits) {
      if (c != '0' && c != '1') throw CliError(2, "--word takes a 0/1 string");
      bits.push_back(c == '1');
    }
    cfg.mode = SimMode::Numerical;
    cfg.input_bindings = concrete_inputs(bits);
  } else {
    cfg.mode = SimMode::Mixed;
    cfg.input_bindings = default_symbolic_inputs(sys);
  }

  double t1 = now_ms();
  Trace tr = run(sys, cfg);
  timer.record("simulate", now_ms() - t1);

  std::cerr << sys.name << " / " << sc.name << ": " << tr.cycles() << " cycle(s), "
            << tr.final_node_count << " final nodes\n";
  for (const std::string &out : sys.outputs)
    std::cerr << "  " << out << " = " << to_string(tr.binding(out, tr.cycles())) << "\n";

  json body;
  body["system"] = sys.name;
  body["scenario"] = sc.name;
  body["mode"] = to_cstr(cfg.mode);
  body["trace"] = trace_to_json(tr);
  body["verdict"] = "completed";
  json inputs;
  inputs["files"] = files;
  inputs["system"] = sys.name;
  inputs["scenario"] = sc.name;
  inputs["steps"] = steps;
  if (!bug.empty()) inputs["bug"] = bug;
  emit_report(make_report("simulate", inputs, body, timer.phases), out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// equiv
// ---------------------------------------------------------------------------

std::map<std::string, std::vector<std::string>> load_families() {
  // enum families of the bundled transmitter prelude
  DeclEnv env;
  env.add_enum("wm_rate", {"WMRATE12", "WMRATE23", "WMRATE34"});
  env.add_enum("wm_mod", {"WMBPSK", "WMQPSK", "WMQAM16"});
  return env.families();
}

Abstraction job_abstraction(const Workspace &ws, const JobDecl &jd) {
  std::map<std::string, std::string> rename(jd.renames.begin(), jd.renames.end());
  RuleSet rules;
  if (!jd.abstract_ruleset.empty()) {
    const RulesetDecl *rs = ws.find_ruleset(jd.abstract_ruleset);
    if (!rs) throw CliError(2, "job names unknown ruleset '" + jd.abstract_ruleset + "'");
    rules = rs->to_ruleset();
  }
  return make_abstraction(std::move(rename), std::move(rules));
}

int cmd_equiv(const std::vector<std::string> &files, const std::string &job_name,
              int width, const std::string &bug, int jobs, const std::string &out_path) {
  PhaseTimer timer;
  double t0 = now_ms();
  Workspace ws = load_files(files);

  const JobDecl *jd = nullptr;
  if (!job_name.empty()) {
    jd = ws.find_job(job_name);
    if (!jd) throw CliError(2, "job '" + job_name + "' not found");
  } else {
    for (const SourceUnit &u : ws.units)
      if (!u.jobs.empty()) {
        jd = &u.jobs.front();
        break;
      }
    if (!jd) throw CliError(2, "no job declaration in the given files");
  }

  ResolvedModel spec = resolve_model(ws, jd->spec_system, width);
  ResolvedModel impl = resolve_model(ws, jd->impl_system, width);
  SreSystem impl_sys = apply_bug(impl, bug);
  timer.record("parse", now_ms() - t0);

  EquivJob job;
  job.name = jd->name;
  job.spec = &spec.system;
  job.impl = &impl_sys;
  job.k_spec = jd->k_spec;
  job.k_imp = jd->k_imp;
  job.abstraction = job_abstraction(ws, *jd);
  job.compare_vars = jd->compares;
  job.scenarios = jd->all_scenarios
                      ? resolve_scenarios(ws, width, {}, {&spec.system, &impl_sys})
                      : resolve_scenarios(ws, width, jd->scenario_names);
  job.input_bindings = default_symbolic_inputs(spec.system);
  job.funcs = &wimax_registry();
  job.jobs = jobs;
  job.max_iterations = g_max_iterations;
  job.delta_cycle_limit = g_delta_cycle_limit;
  static const auto families = load_families();
  job.equiv.families = &families;

  double t1 = now_ms();
  EquivVerdict v = check_equivalence(job);
  timer.record("simulate_and_match", now_ms() - t1);

  Localization loc = localize(v, spec.system);
  std::cerr << "job " << v.job << ": " << to_cstr(v.overall) << "\n";
  for (const ScenarioEquivResult &sc : v.scenarios) {
    if (!sc.error.empty()) {
      std::cerr << "  " << sc.scenario << ": error: " << sc.error << "\n";
      continue;
    }
    size_t bad = 0;
    for (const VarOutcome &o : sc.outcomes)
      if (o.verdict != Equiv::Equal) ++bad;
    std::cerr << "  " << sc.scenario << ": " << (bad ? "MISMATCH" : "ok");
    if (bad)
      for (const VarOutcome &o : sc.outcomes)
        if (o.verdict != Equiv::Equal) std::cerr << " " << o.spec_var;
    std::cerr << "\n";
  }
  if (!loc.groups.empty())
    std::cerr << "  suspected origin: " << loc.suspected_block
              << (loc.low_confidence ? " (low confidence)" : "") << "\n";

  json body;
  body["verdict"] = equiv_to_json(v, loc.groups.empty() ? nullptr : &loc);
  json inputs;
  inputs["files"] = files;
  inputs["job"] = jd->name;
  inputs["width"] = width;
  if (!bug.empty()) inputs["bug"] = bug;
  emit_report(make_report("equiv", inputs, body, timer.phases), out_path);

  switch (v.overall) {
    case EquivOverall::Equivalent: return 0;
    case EquivOverall::NotEquivalent: return 1;
    case EquivOverall::Error: return 2;
  }
  return 2;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

int cmd_check(const std::vector<std::string> &files, const std::string &system_name,
              const std::string &props_csv, const std::string &scenarios_csv, int width,
              const std::string &bug, int jobs, bool replay, const std::string &out_path) {
  PhaseTimer timer;
  double t0 = now_ms();
  Workspace ws = load_files(files);

  std::string name = system_name;
  if (name.empty()) {
    for (const SourceUnit &u : ws.units)
      if (!u.systems.empty()) {
        name = u.systems.front().name;
        break;
      }
  }
  if (name.empty()) throw CliError(2, "no system to check (give a model file or --system)");
  ResolvedModel model = resolve_model(ws, name, width);
  SreSystem sys = apply_bug(model, bug);

  // property pool: declarations from the given files, else the built-in
  // transmitter suite when checking a bundled level
  std::vector<Property> pool;
  for (const Property *p : ws.properties()) pool.push_back(*p);
  if (pool.empty() && model.level) pool = wimax_properties(width);
  std::vector<std::string> wanted = split_csv(props_csv);
  std::vector<Property> props;
  if (wanted.empty()) {
    props = pool;
  } else {
    for (const std::string &n : wanted) {
      auto it = std::find_if(pool.begin(), pool.end(),
                             [&](const Property &p) { return p.name == n; });
      if (it == pool.end()) throw CliError(2, "unknown property '" + n + "'");
      props.push_back(*it);
    }
  }
  if (props.empty())
    throw CliError(2, "no properties to check (give a property file or --props)");

  std::vector<Scenario> scenarios =
      resolve_scenarios(ws, width, split_csv(scenarios_csv), {&sys});
  timer.record("parse", now_ms() - t0);

  CheckOptions opts;
  opts.funcs = &wimax_registry();
  Abstraction abs;
  if (model.level) {
    abs = wimax_abstraction(*model.level);
    opts.abstraction = &abs;
  }
  opts.input_bindings = default_symbolic_inputs(sys);
  opts.max_iterations = g_max_iterations;
  opts.delta_cycle_limit = g_delta_cycle_limit;
  opts.jobs = jobs;

  double t1 = now_ms();
  json verdicts = json::array();
  int exit_code = 0;
  for (const Property &p : props) {
    PropVerdict v = check_property(sys, p, scenarios, opts);
    std::cerr << p.name << " on " << sys.name << ": " << to_cstr(v.outcome) << "\n";
    json jv = prop_to_json(v);
    if (v.counterexample) {
      const Counterexample &ce = *v.counterexample;
      std::cerr << "  counterexample: scenario " << ce.scenario << ", signal " << ce.signal;
      if (ce.index) std::cerr << "[" << *ce.index << "]";
      std::cerr << " = " << ce.value_text << "\n";
      if (replay) {
        bool ok = replay_counterexample(sys, p, ce, scenarios, opts);
        std::cerr << "  numeric replay " << (ok ? "reproduces" : "DOES NOT reproduce")
                  << " the violation\n";
        jv["replay_reproduces"] = ok;
      }
    }
    verdicts.push_back(std::move(jv));
    if (v.outcome == PropOutcome::Error) exit_code = std::max(exit_code, 2);
    else if (v.outcome != PropOutcome::Holds) exit_code = std::max(exit_code, 1);
  }
  timer.record("check", now_ms() - t1);

  json body;
  body["model"] = sys.name;
  body["verdicts"] = std::move(verdicts);
  json inputs;
  inputs["files"] = files;
  inputs["system"] = sys.name;
  inputs["width"] = width;
  if (!bug.empty()) inputs["bug"] = bug;
  emit_report(make_report("check", inputs, body, timer.phases), out_path);
  return exit_code;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct LinFit {
  double slope = 0, intercept = 0, r2 = 0;
};

LinFit least_squares(const std::vector<double> &x, const std::vector<double> &y) {
  LinFit f;
  size_t n = x.size();
  if (n < 2) return f;
  double sx = std::accumulate(x.begin(), x.end(), 0.0);
  double sy = std::accumulate(y.begin(), y.end(), 0.0);
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy == 0) {
    f.r2 = 1.0;  // constant data fits its own mean exactly
    return f;
  }
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    double e = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += e * e;
  }
  f.r2 = 1.0 - ss_res / syy;
  return f;
}

int cmd_bench(const std::string &model_name, const std::string &modes_csv, int repeat,
              int width, int jobs, bool sym_vs_num, const std::string &out_path) {
  ResolvedModel model = resolve_model(Workspace{}, model_name, width);
  const SreSystem &sys = model.system;
  std::vector<Scenario> scenarios = all_scenarios(width);

  std::vector<int> mode_counts;
  for (const std::string &m : split_csv(modes_csv)) mode_counts.push_back(std::stoi(m));
  if (mode_counts.empty()) mode_counts = {1, 3, 5, 7};
  for (int m : mode_counts)
    if (m < 1 || m > static_cast<int>(scenarios.size()))
      throw CliError(2, "mode count out of range: " + std::to_string(m));

  SimConfig base;
  base.steps = 1;
  base.mode = SimMode::Mixed;
  base.funcs = &wimax_registry();
  base.input_bindings = default_symbolic_inputs(sys);
  base.max_iterations = g_max_iterations;
  base.delta_cycle_limit = g_delta_cycle_limit;

  size_t np = mode_counts.size();
  std::vector<std::vector<Scenario>> subsets;
  for (int m : mode_counts)
    subsets.emplace_back(scenarios.begin(), scenarios.begin() + m);

  std::cerr << "scenario scaling on " << sys.name << " (width " << width
            << ", best of " << repeat << ")\n";
  // untimed warmup primes caches and the worker pool
  for (size_t i = 0; i < np; ++i) {
    for (const TraceOrError &t : run_multi_control(sys, subsets[i], base, 1))
      if (!t.ok()) throw CliError(2, "bench scenario failed: " + t.error);
    for (const TraceOrError &t : run_multi_control(sys, subsets[i], base, jobs))
      if (!t.ok()) throw CliError(2, "bench scenario failed: " + t.error);
  }
  // repeats run round-robin across the points so a transient system stall
  // cannot concentrate in one point and bend the scaling curve
  std::vector<std::vector<double>> serial_ms(np), pool_ms(np);
  for (int r = 0; r < repeat; ++r) {
    for (size_t i = 0; i < np; ++i) {
      double t0 = now_ms();
      auto res = run_multi_control(sys, subsets[i], base, 1);
      serial_ms[i].push_back(now_ms() - t0);
      double t1 = now_ms();
      auto res2 = run_multi_control(sys, subsets[i], base, jobs);
      pool_ms[i].push_back(now_ms() - t1);
    }
  }

  json points = json::array();
  std::vector<double> xs, ys;
  std::cerr << "  m  serial-ms  pool-ms\n";
  for (size_t i = 0; i < np; ++i) {
    double sm = *std::min_element(serial_ms[i].begin(), serial_ms[i].end());
    double pm = *std::min_element(pool_ms[i].begin(), pool_ms[i].end());
    std::cerr << "  " << mode_counts[i] << "  " << sm << "  " << pm << "\n";
    json jp;
    jp["modes"] = mode_counts[i];
    jp["serial_ms"] = sm;
    jp["pool_ms"] = pm;
    points.push_back(std::move(jp));
    xs.push_back(mode_counts[i]);
    ys.push_back(sm);
  }
  LinFit fit = least_squares(xs, ys);
  std::cerr << "  linear fit: slope " << fit.slope << " ms/mode, r2 " << fit.r2 << "\n";

  json body;
  body["model"] = sys.name;
  body["width"] = width;
  body["repeat"] = repeat;
  body["jobs"] = jobs;
  json scaling;
  scaling["points"] = std::move(points);
  scaling["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}};
  body["mode_scaling"] = std::move(scaling);

  if (sym_vs_num && width <= 10) {
    // one symbolic run + exhaustive substitution vs exhaustive numeric runs
    Scenario sc = scenarios.front();
    SimConfig sym = base;
    sym.bind_scenario(sc);
    double t0 = now_ms();
    Trace symbolic = run(sys, sym);
    double sym_run_ms = now_ms() - t0;
    long n = 1L << width;
    double t1 = now_ms();
    for (long v = 0; v < n; ++v) {
      std::vector<bool> bits;
      for (int i = 0; i < width; ++i) bits.push_back((v >> i) & 1);
      (void)substitute_trace(symbolic, bit_assignment(bits), &wimax_registry(),
                             g_max_iterations);
    }
    double subst_ms = now_ms() - t1;
    double t2 = now_ms();
    for (long v = 0; v < n; ++v) {
      std::vector<bool> bits;
      for (int i = 0; i < width; ++i) bits.push_back((v >> i) & 1);
      SimConfig num = base;
      num.mode = SimMode::Numerical;
      num.input_bindings = concrete_inputs(bits);
      num.bind_scenario(sc);
      (void)run(sys, num);
    }
    double numeric_ms = now_ms() - t2;
    std::cerr << "symbolic run " << sym_run_ms << " ms + " << n << " substitutions "
              << subst_ms << " ms vs " << n << " numeric runs " << numeric_ms << " ms\n";
    json sv;
    sv["scenario"] = sc.name;
    sv["assignments"] = n;
    sv["symbolic_run_ms"] = sym_run_ms;
    sv["substitution_ms"] = subst_ms;
    sv["symbolic_total_ms"] = sym_run_ms + subst_ms;
    sv["numeric_total_ms"] = numeric_ms;
    sv["simulations_symbolic"] = 1;
    sv["simulations_numeric"] = n;
    body["sym_vs_num"] = std::move(sv);
  }

  json inputs;
  inputs["model"] = model_name;
  inputs["modes"] = mode_counts;
  inputs["repeat"] = repeat;
  inputs["width"] = width;
  PhaseTimer timer;
  emit_report(make_report("bench", inputs, body, timer.phases), out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// emit-models
// ---------------------------------------------------------------------------

SourceUnit prelude_unit(int width) {
  SourceUnit u;
  u.enums.push_back({"wm_rate", {"WMRATE12", "WMRATE23", "WMRATE34"}});
  u.enums.push_back({"wm_mod", {"WMBPSK", "WMQPSK", "WMQAM16"}});
  u.consts.push_back("INVALID_DATA");
  u.scenarios = all_scenarios(width);
  return u;
}

SourceUnit appendix_randomizer_unit() {
  // equivalence of dispatches over uninterpreted randomizer functions: the
  // two systems normalize to identical terms without any function semantics
  SourceUnit u;
  u.enums.push_back({"ctl_mode", {"CTL_ON", "CTL_OFF"}});

  Term w = Term::var("in.word", 0);
  Term on = Term::cmp(CmpOp::Eq, Term::var("ctl", 0), Term::atom("CTL_ON", "ctl_mode"));
  auto mk = [&](const std::string &name, Term body) {
    SreSystem sys;
    sys.name = name;
    sys.inputs = {"in.word"};
    sys.controls = {"ctl"};
    sys.sorts["in.word"] = Sort::word();
    sys.sorts["ctl"] = Sort::enum_family("ctl_mode");
    sys.variables = {"r.out"};
    sys.sorts["r.out"] = Sort::word();
    sys.equations.push_back({"r.out", std::move(body)});
    sys.outputs = {"r.out"};
    return sys;
  };
  u.systems.push_back(mk("rand_dispatch_a",
                         Term::ite(on, Term::func("randFunc_01", {w}),
                                   Term::func("randFunc_02", {w}))));
  // same dispatch written through a negated condition; IF reduction flips it
  u.systems.push_back(mk("rand_dispatch_b",
                         Term::ite(Term::lnot(on), Term::func("randFunc_02", {w}),
                                   Term::func("randFunc_01", {w}))));

  JobDecl j;
  j.name = "randomizer_dispatch";
  j.spec_system = "rand_dispatch_a";
  j.impl_system = "rand_dispatch_b";
  j.k_spec = j.k_imp = 1;
  j.scenario_names = {"ctl_on_case", "ctl_off_case"};
  u.jobs.push_back(std::move(j));

  Scenario s1;
  s1.name = "ctl_on_case";
  s1.bindings["ctl"] = Term::atom("CTL_ON", "ctl_mode");
  Scenario s2;
  s2.name = "ctl_off_case";
  s2.bindings["ctl"] = Term::atom("CTL_OFF", "ctl_mode");
  u.scenarios = {std::move(s1), std::move(s2)};
  return u;
}

SourceUnit rules_unit() {
  SourceUnit u;
  RulesetDecl rs;
  rs.name = "R_Abst";
  rs.rules.emplace_back(Term::func("to_frame", {Term::hole("x")}), Term::hole("x"));
  u.rulesets.push_back(std::move(rs));
  return u;
}

SourceUnit jobs_unit() {
  SourceUnit u;
  JobDecl a;
  a.name = "fl_vs_ptl8";
  a.spec_system = "wimax_fl";
  a.impl_system = "wimax_ptl8";
  a.k_spec = a.k_imp = 1;
  a.abstract_ruleset = "R_Abst";
  a.all_scenarios = true;
  u.jobs.push_back(std::move(a));

  JobDecl b;
  b.name = "ptl8_vs_ptl4";
  b.spec_system = "wimax_ptl8";
  b.impl_system = "wimax_ptl4";
  b.k_spec = b.k_imp = 1;
  for (const auto &[from, to] : wimax_abstraction(WimaxLevel::PTL4).rename)
    b.renames.emplace_back(from, to);
  b.abstract_ruleset = "R_Abst";
  b.all_scenarios = true;
  u.jobs.push_back(std::move(b));
  return u;
}

int cmd_emit_models(const std::string &dir, int width) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string &name, const SourceUnit &unit) {
    std::string path = dir + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CliError(2, "cannot write " + path);
    f << serialize_unit(unit);
    std::cerr << "wrote " << path << "\n";
  };
  auto system_unit = [](SreSystem sys) {
    SourceUnit u;
    u.systems.push_back(std::move(sys));
    return u;
  };
  auto props = [&] {
    SourceUnit u;
    u.properties = wimax_properties(width);
    return u;
  };

  write("prelude.sre", prelude_unit(width));
  write("wimax_fl.sre", system_unit(build_model(WimaxLevel::FL, width)));
  write("wimax_ptl8.sre", system_unit(build_model(WimaxLevel::PTL8, width)));
  write("wimax_ptl4.sre", system_unit(build_model(WimaxLevel::PTL4, width)));
  write("rules.sre", rules_unit());
  write("props.sre", props());
  write("jobs.sre", jobs_unit());
  write("appendix_randomizer.sre", appendix_randomizer_unit());
  write("fifo.sre", system_unit(build_fifo_model()));
  write("scheduler.sre", system_unit(build_scheduler_model()));
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"symbolic simulation and verification of recurrence-equation models"};
  app.require_subcommand(1);
  g_max_iterations = env_int("SRE_MAX_ITERATIONS", kDefaultMaxIterations);
  g_delta_cycle_limit = env_int("SRE_DELTA_CYCLE_LIMIT", kDefaultDeltaCycleLimit);

  std::vector<std::string> files;
  std::string out_path, system_name, scenario_name, job_name, bug, word_bits;
  std::string props_csv, scenarios_csv, modes_csv, model_name = "wimax_fl", dir = "models";
  int steps = 1, width = 8, jobs = default_jobs(), repeat = 5;
  bool no_replay = false, no_sym_vs_num = false;

  CLI::App *validate_cmd = app.add_subcommand("validate", "parse and validate model files");
  validate_cmd->add_option("files", files, "model files")->required()->expected(-1);
  validate_cmd->add_option("--out", out_path, "report path (default stdout)");

  CLI::App *sim_cmd = app.add_subcommand("simulate", "run a bounded symbolic or numeric trace");
  sim_cmd->add_option("files", files, "model files (bundled levels usable by name)");
  sim_cmd->add_option("--system", system_name, "system name (default: first parsed, else wimax_fl)");
  sim_cmd->add_option("--scenario,--mode", scenario_name, "scenario name (default: first)");
  sim_cmd->add_option("--steps", steps, "cycles to simulate")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--width", width, "data width for bundled models");
  sim_cmd->add_option("--word", word_bits, "concrete input bits, LSB first (numeric mode)");
  sim_cmd->add_option("--bug", bug, "inject a catalogued fault (B1..B4)");
  sim_cmd->add_option("--out", out_path, "report path (default stdout)");

  CLI::App *equiv_cmd = app.add_subcommand("equiv", "check computational equivalence per a job");
  equiv_cmd->add_option("files", files, "job + model files")->required()->expected(-1);
  equiv_cmd->add_option("--job", job_name, "job name (default: first declared)");
  equiv_cmd->add_option("--width", width, "data width for bundled models");
  equiv_cmd->add_option("--bug", bug, "inject a catalogued fault into the implementation");
  equiv_cmd->add_option("--jobs", jobs, "worker pool size");
  equiv_cmd->add_option("--out", out_path, "report path (default stdout)");

  CLI::App *check_cmd = app.add_subcommand("check", "check properties against a model");
  check_cmd->add_option("files", files, "model + property files");
  check_cmd->add_option("--system", system_name, "system name");
  check_cmd->add_option("--props", props_csv, "comma list of property names (default: all)");
  check_cmd->add_option("--scenarios", scenarios_csv, "comma list of scenario names");
  check_cmd->add_option("--width", width, "data width for bundled models");
  check_cmd->add_option("--bug", bug, "inject a catalogued fault (B1..B4)");
  check_cmd->add_option("--jobs", jobs, "worker pool size");
  check_cmd->add_flag("--no-replay", no_replay, "skip numeric counterexample replay");
  check_cmd->add_option("--out", out_path, "report path (default stdout)");

  CLI::App *bench_cmd = app.add_subcommand("bench", "scenario-scaling and symbolic-vs-numeric benchmark");
  bench_cmd->add_option("--model", model_name, "bundled level or system name");
  bench_cmd->add_option("--modes", modes_csv, "mode counts, e.g. 1,3,5,7");
  bench_cmd->add_option("--repeat", repeat, "runs per point (fastest reported)");
  bench_cmd->add_option("--width", width, "data width");
  bench_cmd->add_option("--jobs", jobs, "worker pool size for the pooled series");
  bench_cmd->add_flag("--no-sym-vs-num", no_sym_vs_num, "skip the symbolic-vs-numeric phase");
  bench_cmd->add_option("--out", out_path, "report path (default stdout)");

  CLI::App *emit_cmd = app.add_subcommand("emit-models", "write the bundled .sre model files");
  emit_cmd->add_option("--dir", dir, "output directory");
  emit_cmd->add_option("--width", width, "data width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(files, out_path);
    if (sim_cmd->parsed())
      return cmd_simulate(files, system_name, scenario_name, steps, width, word_bits, bug,
                          out_path);
    if (equiv_cmd->parsed()) return cmd_equiv(files, job_name, width, bug, jobs, out_path);
    if (check_cmd->parsed())
      return cmd_check(files, system_name, props_csv, scenarios_csv, width, bug, jobs,
                       !no_replay, out_path);
    if (bench_cmd->parsed())
      return cmd_bench(model_name, modes_csv, repeat, width, jobs, !no_sym_vs_num, out_path);
    if (emit_cmd->parsed()) return cmd_emit_models(dir, width);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const CliError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const NonTermination &e) {
    std::cerr << "error: rewriting did not reach a fixpoint (" << e.ruleset << ")\n";
    return 3;
  } catch (const SimError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind == SimError::Kind::DeltaCycleLimit ? 3 : 2;
  } catch (const CorrespondenceGap &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
