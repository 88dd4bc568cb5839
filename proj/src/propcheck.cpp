#include "sre/propcheck.hpp"

#include <algorithm>
#include <chrono>

#include "sre/parallel.hpp"

namespace sre {

const char *to_cstr(Property::Category c) {
  switch (c) {
    case Property::Category::Global: return "global";
    case Property::Category::Local: return "local";
    case Property::Category::Control: return "control";
  }
  return "?";
}

const char *to_cstr(PropOutcome o) {
  switch (o) {
    case PropOutcome::Holds: return "holds";
    case PropOutcome::Fails: return "fails";
    case PropOutcome::Unproven: return "unproven";
    case PropOutcome::Error: return "error";
  }
  return "?";
}

namespace {

Term map_term(const Term &t, const std::function<std::optional<Term>(const Term &)> &f) {
  if (auto r = f(t)) return *r;
  if (t.arity() == 0) return t;
  TermList kids;
  kids.reserve(t.arity());
  bool changed = false;
  for (const Term &k : t.kids()) {
    Term nk = map_term(k, f);
    if (!nk.same_node(k)) changed = true;
    kids.push_back(std::move(nk));
  }
  return changed ? t.with_kids(std::move(kids)) : t;
}

Term subst_syms(const Term &t, const std::map<std::string, Term> &syms) {
  if (syms.empty()) return t;
  return map_term(t, [&](const Term &x) -> std::optional<Term> {
    if (x.kind() == Kind::SymInput) {
      auto it = syms.find(x.name());
      if (it != syms.end()) return it->second;
    }
    return std::nullopt;
  });
}

std::optional<std::string> first_varref(const Term &t) {
  if (t.kind() == Kind::VarRef) return t.name();
  for (const Term &k : t.kids())
    if (auto r = first_varref(k)) return r;
  return std::nullopt;
}

// trace rows renamed onto checker naming with conversion markers eliminated
struct AbstractTrace {
  std::vector<std::map<std::string, Term>> rows;

  AbstractTrace(const Trace &tr, const Abstraction *abs, int max_iterations) {
    rows.reserve(tr.rows.size());
    for (const auto &row : tr.rows) {
      std::map<std::string, Term> out;
      for (const auto &[name, term] : row) {
        std::string key = name;
        Term val = term;
        if (abs) {
          auto it = abs->rename.find(name);
          if (it != abs->rename.end()) key = it->second;
          if (!abs->term_rules.empty())
            val = replace_repeated(val, abs->term_rules, max_iterations);
        }
        out.emplace(std::move(key), std::move(val));
      }
      rows.push_back(std::move(out));
    }
  }

  Term binding(const std::string &signal, int row) const {
    if (row < 0 || row >= static_cast<int>(rows.size())) return Term();
    auto it = rows[static_cast<size_t>(row)].find(signal);
    return it == rows[static_cast<size_t>(row)].end() ? Term() : it->second;
  }
};

// substitutes trace bindings for variable references, offset = cycles
// before the check row
Term subst_trace(const Term &t, const AbstractTrace &tr, int check_row,
                 std::vector<std::string> &missing) {
  return map_term(t, [&](const Term &x) -> std::optional<Term> {
    if (x.kind() != Kind::VarRef) return std::nullopt;
    Term b = tr.binding(x.name(), check_row - x.offset());
    if (b.null()) {
      missing.push_back(x.name());
      return std::nullopt;
    }
    return b;
  });
}

long to_long(const Value &v) {
  if (!v.is_num() || boost::multiprecision::denominator(v.q) != 1)
    throw std::runtime_error("quantifier bound is not an integer");
  return static_cast<long>(boost::multiprecision::numerator(v.q));
}

struct InstanceDecision {
  enum class Kind { Holds, Fails, Unproven } kind = Kind::Holds;
  size_t conjunct = 0;
  Term failed;      // instantiated conjunct (checker naming, index applied)
  Term residual;    // simplified trace-substituted conjunct
  Assignment witness;
  std::string note;
};

}  // namespace

PropVerdict check_property(const SreSystem &impl, const Property &prop,
                           const std::vector<Scenario> &scenarios,
                           const CheckOptions &opts) {
  if (prop.body.null()) throw std::invalid_argument("property has no body");
  PropVerdict verdict;
  verdict.property = prop.name;
  verdict.model = impl.name;
  verdict.scenarios.resize(scenarios.size());

  RuleSet simp = default_simplifier(opts.funcs);
  auto t_start = std::chrono::steady_clock::now();

  par_for(scenarios.size(), opts.jobs, [&](size_t si) {
    const Scenario &sc = scenarios[si];
    ScenarioPropResult &res = verdict.scenarios[si];
    res.scenario = sc.name;
    auto t0 = std::chrono::steady_clock::now();
    auto done = [&] {
      res.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    };

    if (prop.guard) {
      auto it = sc.bindings.find(prop.guard->control);
      if (it == sc.bindings.end() || !term_equal(it->second, prop.guard->value)) {
        res.skipped = true;
        done();
        return;
      }
    }

    try {
      SimConfig cfg;
      cfg.steps = prop.horizon;
      cfg.mode = SimMode::Mixed;
      cfg.input_bindings = opts.input_bindings;
      cfg.funcs = opts.funcs;
      cfg.delta_cycle_limit = opts.delta_cycle_limit;
      cfg.max_iterations = opts.max_iterations;
      cfg.bind_scenario(sc);
      Trace tr = run(impl, cfg);
      res.node_count = tr.final_node_count;

      AbstractTrace atr(tr, opts.abstraction, opts.max_iterations);
      int check_row = prop.horizon;

      // attribute values usable inside bounds and body
      std::map<std::string, Term> attr_syms;
      Assignment attr_vals;
      for (const auto &[k, v] : sc.attrs) {
        attr_syms[k] = Term::number(v);
        attr_vals[k] = Value::num(Rational(v));
      }

      long lo = 0, hi = 0;
      if (prop.quant) {
        EvalEnv env;
        env.funcs = opts.funcs;
        env.inputs = &attr_vals;
        auto bound = [&](const Term &t, const char *which) {
          EvalResult r = eval(t, env);
          if (!r.ok())
            throw std::runtime_error(std::string("cannot evaluate ") + which +
                                     " quantifier bound: " + r.error);
          return to_long(*r.value);
        };
        lo = bound(prop.quant->lo, "lower");
        hi = bound(prop.quant->hi, "upper");
      }

      std::vector<Term> conjuncts;
      if (prop.body.kind() == Kind::Logic && prop.body.logic_op() == LogicOp::And)
        conjuncts.assign(prop.body.kids().begin(), prop.body.kids().end());
      else
        conjuncts.push_back(prop.body);

      EquivOptions eo = opts.equiv;
      if (!eo.funcs) eo.funcs = opts.funcs;
      eo.max_iterations = opts.max_iterations;

      auto decide_instance = [&](std::optional<long> idx) -> InstanceDecision {
        std::map<std::string, Term> syms = attr_syms;
        if (idx && prop.quant) syms[prop.quant->index] = Term::number(*idx);
        InstanceDecision d;
        for (size_t ci = 0; ci < conjuncts.size(); ++ci) {
          Term inst = subst_syms(conjuncts[ci], syms);
          std::vector<std::string> missing;
          Term sub = subst_trace(inst, atr, check_row, missing);
          if (!missing.empty())
            throw std::runtime_error("signal not in trace: " + missing.front());
          Term norm = replace_repeated(sub, simp, opts.max_iterations);
          if (norm.is_true()) continue;
          d.conjunct = ci;
          d.failed = inst;
          d.residual = norm;
          if (norm.is_false()) {
            d.kind = InstanceDecision::Kind::Fails;
            return d;
          }
          EquivResult er = equiv_terms(norm, Term::boolean(true), eo);
          if (er.verdict == Equiv::Equal) continue;
          if (er.verdict == Equiv::NotEqual) {
            d.kind = InstanceDecision::Kind::Fails;
            d.witness = std::move(er.witness);
            return d;
          }
          d.kind = InstanceDecision::Kind::Unproven;
          d.note = er.note.empty() ? "undecided residual" : er.note;
          return d;
        }
        d.kind = InstanceDecision::Kind::Holds;
        return d;
      };

      auto record_failure = [&](const InstanceDecision &d, std::optional<long> idx) {
        Counterexample ce;
        ce.property = prop.name;
        ce.scenario = sc.name;
        ce.index = idx;
        ce.witness = d.witness;
        ce.failed_term = d.failed;
        ce.signal = first_varref(d.failed).value_or("");
        if (!ce.signal.empty()) {
          Term sig = atr.binding(ce.signal, check_row);
          if (!sig.null()) {
            if (!d.witness.empty()) {
              std::map<std::string, Term> wsyms;
              for (const auto &[k, v] : d.witness) wsyms[k] = value_to_term(v);
              try {
                sig = replace_repeated(subst_syms(sig, wsyms), simp, opts.max_iterations);
              } catch (const NonTermination &) {
              }
            }
            ce.value_text = to_string(sig);
          }
        }
        res.outcome = PropOutcome::Fails;
        res.counterexample = std::move(ce);
      };

      bool any_unproven = false;
      std::string unproven_note;
      if (!prop.quant) {
        InstanceDecision d = decide_instance(std::nullopt);
        if (d.kind == InstanceDecision::Kind::Fails)
          record_failure(d, std::nullopt);
        else if (d.kind == InstanceDecision::Kind::Unproven) {
          any_unproven = true;
          unproven_note = d.note + "; residual: " + to_string(d.residual);
        }
      } else {
        for (long i = lo; i <= hi; ++i) {
          InstanceDecision d = decide_instance(i);
          if (d.kind == InstanceDecision::Kind::Fails) {
            record_failure(d, i);
            break;
          }
          if (d.kind == InstanceDecision::Kind::Unproven && !any_unproven) {
            any_unproven = true;
            unproven_note = "index " + std::to_string(i) + ": " + d.note +
                            "; residual: " + to_string(d.residual);
          }
        }
      }
      if (res.outcome != PropOutcome::Fails && any_unproven) {
        res.outcome = PropOutcome::Unproven;
        res.note = unproven_note;
      }
    } catch (const NonTermination &) {
      res.outcome = PropOutcome::Error;
      res.note = "simplification did not terminate";
    } catch (const std::exception &e) {
      res.outcome = PropOutcome::Error;
      res.note = e.what();
    }
    done();
  });

  auto rank = [](PropOutcome o) {
    switch (o) {
      case PropOutcome::Holds: return 0;
      case PropOutcome::Unproven: return 1;
      case PropOutcome::Fails: return 2;
      case PropOutcome::Error: return 3;
    }
    return 3;
  };
  for (const ScenarioPropResult &r : verdict.scenarios) {
    if (r.skipped) continue;
    if (rank(r.outcome) > rank(verdict.outcome)) verdict.outcome = r.outcome;
    if (r.counterexample && !verdict.counterexample)
      verdict.counterexample = r.counterexample;
  }
  verdict.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t_start)
                        .count();
  return verdict;
}

std::vector<SuiteCell> property_suite(
    const std::vector<SuiteModel> &models, const std::vector<Property> &properties,
    const std::vector<std::pair<std::string, std::vector<Scenario>>> &scenario_sets,
    const CheckOptions &opts) {
  struct CellIdx {
    size_t m, p, s;
  };
  std::vector<CellIdx> idx;
  for (size_t m = 0; m < models.size(); ++m)
    for (size_t p = 0; p < properties.size(); ++p)
      for (size_t s = 0; s < scenario_sets.size(); ++s) idx.push_back({m, p, s});

  std::vector<SuiteCell> cells(idx.size());
  par_for(idx.size(), opts.jobs, [&](size_t k) {
    const CellIdx &c = idx[k];
    const SuiteModel &model = models[c.m];
    const Property &prop = properties[c.p];
    SuiteCell &cell = cells[k];
    cell.model = model.name;
    cell.property = prop.name;
    cell.scenario_set = scenario_sets[c.s].first;
    CheckOptions co = opts;
    co.jobs = 1;  // cells already run in parallel
    co.abstraction = model.abstraction;
    if (!model.input_bindings.empty()) co.input_bindings = model.input_bindings;
    try {
      if (!model.system) throw std::invalid_argument("suite model has no system");
      cell.verdict = check_property(*model.system, prop, scenario_sets[c.s].second, co);
    } catch (const std::exception &e) {
      cell.verdict.property = prop.name;
      cell.verdict.model = model.name;
      cell.verdict.outcome = PropOutcome::Error;
      ScenarioPropResult r;
      r.scenario = "*";
      r.outcome = PropOutcome::Error;
      r.note = e.what();
      cell.verdict.scenarios = {std::move(r)};
    }
  });
  return cells;
}

bool replay_counterexample(const SreSystem &impl, const Property &prop,
                           const Counterexample &ce, const std::vector<Scenario> &scenarios,
                           const CheckOptions &opts) {
  const Scenario *sc = nullptr;
  for (const Scenario &s : scenarios)
    if (s.name == ce.scenario) sc = &s;
  if (!sc) throw std::invalid_argument("counterexample scenario not in list");

  // complete the witness: unnamed symbolic inputs default to false
  std::map<std::string, Term> wsyms;
  for (const auto &[k, v] : ce.witness) wsyms[k] = value_to_term(v);
  std::map<std::string, Term> inputs;
  for (const auto &[k, t] : opts.input_bindings) {
    Term concrete = map_term(t, [&](const Term &x) -> std::optional<Term> {
      if (x.kind() != Kind::SymInput) return std::nullopt;
      auto it = wsyms.find(x.name());
      return it != wsyms.end() ? it->second : Term::boolean(false);
    });
    inputs[k] = concrete;
  }

  SimConfig cfg;
  cfg.steps = prop.horizon;
  cfg.mode = SimMode::Numerical;
  cfg.input_bindings = std::move(inputs);
  cfg.funcs = opts.funcs;
  cfg.delta_cycle_limit = opts.delta_cycle_limit;
  cfg.max_iterations = opts.max_iterations;
  cfg.bind_scenario(*sc);
  Trace tr = run(impl, cfg);

  AbstractTrace atr(tr, opts.abstraction, opts.max_iterations);
  std::vector<std::string> missing;
  Term sub = subst_trace(ce.failed_term, atr, prop.horizon, missing);
  if (!missing.empty()) return false;
  Term norm = replace_repeated(sub, default_simplifier(opts.funcs), opts.max_iterations);
  return norm.is_false();
}

}  // namespace sre
