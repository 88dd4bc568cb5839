#include "sre/equivcheck.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "sre/parallel.hpp"

namespace sre {

uint64_t peak_rss_bytes();  // report.cpp

const char *to_cstr(EquivOverall o) {
  switch (o) {
    case EquivOverall::Equivalent: return "equivalent";
    case EquivOverall::NotEquivalent: return "not-equivalent";
    case EquivOverall::Error: return "error";
  }
  return "?";
}

std::vector<const VarOutcome *> EquivVerdict::mismatches() const {
  std::vector<const VarOutcome *> out;
  for (const ScenarioEquivResult &sc : scenarios)
    for (const VarOutcome &o : sc.outcomes)
      if (o.verdict != Equiv::Equal) out.push_back(&o);
  return out;
}

namespace {

std::string join(const std::vector<std::string> &xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i];
  }
  return out;
}

}  // namespace

CorrespondenceGap::CorrespondenceGap(std::vector<std::string> m)
    : std::runtime_error("no implementation counterpart for: " + join(m)),
      missing(std::move(m)) {}

namespace {

std::set<std::string> all_signals(const SreSystem &sys) {
  std::set<std::string> s(sys.variables.begin(), sys.variables.end());
  s.insert(sys.inputs.begin(), sys.inputs.end());
  s.insert(sys.controls.begin(), sys.controls.end());
  return s;
}

// spec-name -> impl-name correspondence induced by the abstraction renames
std::map<std::string, std::string> correspondence(const EquivJob &job) {
  std::set<std::string> impl_sigs = all_signals(*job.impl);
  std::map<std::string, std::string> by_spec_name;
  for (const std::string &x : impl_sigs) {
    auto it = job.abstraction.rename.find(x);
    by_spec_name[it != job.abstraction.rename.end() ? it->second : x] = x;
  }
  return by_spec_name;
}

std::vector<std::pair<std::string, std::string>> resolve_pairs(const EquivJob &job) {
  if (!job.compare_vars.empty()) {
    std::set<std::string> spec_sigs = all_signals(*job.spec);
    std::set<std::string> impl_sigs = all_signals(*job.impl);
    std::vector<std::string> missing;
    for (const auto &[sv, iv] : job.compare_vars) {
      if (!spec_sigs.count(sv)) missing.push_back(sv + " (specification side)");
      if (!impl_sigs.count(iv)) missing.push_back(iv + " (implementation side)");
    }
    if (!missing.empty()) throw CorrespondenceGap(std::move(missing));
    return job.compare_vars;
  }

  auto by_spec_name = correspondence(job);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const std::string &sv : job.spec->variables) {
    auto it = by_spec_name.find(sv);
    if (it != by_spec_name.end()) pairs.emplace_back(sv, it->second);
  }
  std::vector<std::string> missing;
  for (const std::string &out : job.spec->outputs) {
    bool covered = std::any_of(pairs.begin(), pairs.end(),
                               [&](const auto &p) { return p.first == out; });
    if (!covered) missing.push_back(out);
  }
  if (!missing.empty()) throw CorrespondenceGap(std::move(missing));
  return pairs;
}

}  // namespace

EquivVerdict check_equivalence(const EquivJob &job) {
  if (!job.spec || !job.impl)
    throw std::invalid_argument("equivalence job needs both systems");
  auto pairs = resolve_pairs(job);
  if (pairs.empty()) throw CorrespondenceGap({"<no common signals>"});

  EquivVerdict verdict;
  verdict.job = job.name;
  verdict.scenarios.resize(std::max<size_t>(job.scenarios.size(), 1));

  std::vector<Scenario> scenarios = job.scenarios;
  if (scenarios.empty()) scenarios.push_back(Scenario{"default", {}, {}});

  auto t_start = std::chrono::steady_clock::now();
  par_for(scenarios.size(), job.jobs, [&](size_t si) {
    const Scenario &sc = scenarios[si];
    ScenarioEquivResult &res = verdict.scenarios[si];
    res.scenario = sc.name;
    auto t0 = std::chrono::steady_clock::now();
    try {
      SimConfig base;
      base.mode = SimMode::Mixed;
      base.input_bindings = job.input_bindings;
      base.funcs = job.funcs;
      base.delta_cycle_limit = job.delta_cycle_limit;
      base.max_iterations = job.max_iterations;
      base.bind_scenario(sc);

      SimConfig cs = base;
      cs.steps = job.k_spec;
      Trace ts = run(*job.spec, cs);
      SimConfig ci = base;
      ci.steps = job.k_imp;
      Trace ti = run(*job.impl, ci);
      res.node_count = ts.final_node_count + ti.final_node_count;

      EquivOptions eo = job.equiv;
      if (!eo.funcs) eo.funcs = job.funcs;
      eo.max_iterations = job.max_iterations;

      for (const auto &[sv, iv] : pairs) {
        VarOutcome o;
        o.scenario = sc.name;
        o.spec_var = sv;
        o.impl_var = iv;
        Term a = ts.binding(sv, job.k_spec);
        Term b = ti.binding(iv, job.k_imp);
        if (a.null() || b.null()) {
          o.verdict = Equiv::Unknown;
          o.note = "signal missing from trace";
          res.outcomes.push_back(std::move(o));
          continue;
        }
        try {
          if (!job.abstraction.term_rules.empty()) {
            a = replace_repeated(a, job.abstraction.term_rules, job.max_iterations);
            b = replace_repeated(b, job.abstraction.term_rules, job.max_iterations);
          }
          o.spec_term = a;
          o.impl_term = b;
          EquivResult er = equiv_terms(a, b, eo);
          o.verdict = er.verdict;
          o.witness = std::move(er.witness);
          o.note = std::move(er.note);
        } catch (const NonTermination &) {
          o.verdict = Equiv::Unknown;
          o.note = "abstraction rules did not terminate";
        }
        res.outcomes.push_back(std::move(o));
      }
    } catch (const std::exception &e) {
      res.error = e.what();
    }
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  });

  bool any_error = false, any_noneq = false, any_unknown = false;
  for (const ScenarioEquivResult &sc : verdict.scenarios) {
    if (!sc.error.empty()) any_error = true;
    for (const VarOutcome &o : sc.outcomes) {
      if (o.verdict == Equiv::NotEqual) any_noneq = true;
      if (o.verdict == Equiv::Unknown) any_unknown = true;
    }
  }
  verdict.has_unknown = any_unknown;
  verdict.overall = any_error ? EquivOverall::Error
                  : (any_noneq || any_unknown) ? EquivOverall::NotEquivalent
                                               : EquivOverall::Equivalent;
  verdict.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t_start)
                        .count();
  verdict.peak_rss_bytes = peak_rss_bytes();
  return verdict;
}

namespace {

std::string block_of(const std::string &signal) {
  auto dot = signal.find('.');
  return dot == std::string::npos ? signal : signal.substr(0, dot);
}

}  // namespace

Localization localize(const EquivVerdict &verdict, const SreSystem &spec) {
  Localization loc;

  // dataflow position = first declaration with the block's prefix
  std::vector<std::string> block_order;
  for (const std::string &v : spec.variables) {
    std::string b = block_of(v);
    if (std::find(block_order.begin(), block_order.end(), b) == block_order.end())
      block_order.push_back(b);
  }

  std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> hits;
  for (const VarOutcome *o : verdict.mismatches()) {
    auto &h = hits[block_of(o->spec_var)];
    h.first.insert(o->spec_var);
    h.second.insert(o->scenario);
  }
  if (hits.empty()) return loc;

  for (const std::string &b : block_order) {
    auto it = hits.find(b);
    if (it == hits.end()) continue;
    Localization::Group g;
    g.block = b;
    g.signals.assign(it->second.first.begin(), it->second.first.end());
    g.scenarios.assign(it->second.second.begin(), it->second.second.end());
    loc.groups.push_back(std::move(g));
    hits.erase(it);
  }
  // mismatched signals outside the spec's declared variables (if any) last
  for (auto &[b, h] : hits) {
    Localization::Group g;
    g.block = b;
    g.signals.assign(h.first.begin(), h.first.end());
    g.scenarios.assign(h.second.begin(), h.second.end());
    loc.groups.push_back(std::move(g));
  }

  loc.suspected_block = loc.groups.front().block;
  loc.suspected_scenarios = loc.groups.front().scenarios;
  std::set<std::string> mism_blocks;
  for (const auto &g : loc.groups) mism_blocks.insert(g.block);
  size_t spec_blocks = block_order.size();
  loc.low_confidence = spec_blocks > 1 && mism_blocks.size() >= spec_blocks;
  return loc;
}

}  // namespace sre
