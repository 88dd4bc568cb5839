#include "sre/report.hpp"

#include <fstream>
#include <iostream>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/resource.h>
#endif

namespace sre {

uint64_t peak_rss_bytes() {
#if defined(__unix__) || defined(__APPLE__)
  struct rusage ru {};
  if (getrusage(RUSAGE_SELF, &ru) != 0) return 0;
#if defined(__APPLE__)
  return static_cast<uint64_t>(ru.ru_maxrss);  // bytes on macOS
#else
  return static_cast<uint64_t>(ru.ru_maxrss) * 1024;  // kilobytes on Linux
#endif
#else
  return 0;
#endif
}

namespace {

using nlohmann::json;

json assignment_to_json(const Assignment &a) {
  json out = json::object();
  for (const auto &[k, v] : a) out[k] = to_string(v);
  return out;
}

}  // namespace

nlohmann::json trace_to_json(const Trace &trace) {
  json rows = json::array();
  for (size_t k = 0; k < trace.rows.size(); ++k) {
    json row = json::object();
    row["t"] = trace.t0 + static_cast<int>(k);
    json bindings = json::object();
    for (const auto &[name, term] : trace.rows[k]) bindings[name] = to_string(term);
    row["bindings"] = std::move(bindings);
    if (k > 0 && k - 1 < trace.stats.size()) {
      const CycleStats &st = trace.stats[k - 1];
      row["delta_cycles"] = st.delta_cycles;
      row["wall_ms"] = st.wall_ms;
      row["node_count"] = st.node_count;
    }
    rows.push_back(std::move(row));
  }
  json out;
  out["t0"] = trace.t0;
  out["cycles"] = trace.cycles();
  out["rows"] = std::move(rows);
  out["total_wall_ms"] = trace.total_wall_ms;
  out["final_node_count"] = trace.final_node_count;
  out["peak_rss_bytes"] = trace.peak_rss_bytes;
  return out;
}

nlohmann::json counterexample_to_json(const Counterexample &ce) {
  json out;
  out["property"] = ce.property;
  out["scenario"] = ce.scenario;
  out["signal"] = ce.signal;
  if (ce.index) out["index"] = *ce.index;
  out["value"] = ce.value_text;
  out["witness"] = assignment_to_json(ce.witness);
  if (!ce.failed_term.null()) out["failed_term"] = to_string(ce.failed_term);
  return out;
}

nlohmann::json equiv_to_json(const EquivVerdict &v, const Localization *loc) {
  json out;
  out["job"] = v.job;
  out["overall"] = to_cstr(v.overall);
  out["has_unknown"] = v.has_unknown;
  out["wall_ms"] = v.wall_ms;
  out["peak_rss_bytes"] = v.peak_rss_bytes;
  json scs = json::array();
  for (const ScenarioEquivResult &sc : v.scenarios) {
    json s;
    s["scenario"] = sc.scenario;
    if (!sc.error.empty()) s["error"] = sc.error;
    s["wall_ms"] = sc.wall_ms;
    s["node_count"] = sc.node_count;
    json outs = json::array();
    for (const VarOutcome &o : sc.outcomes) {
      json jo;
      jo["spec_var"] = o.spec_var;
      jo["impl_var"] = o.impl_var;
      jo["verdict"] = o.verdict == Equiv::Equal       ? "equal"
                      : o.verdict == Equiv::NotEqual ? "not-equal"
                                                     : "unknown";
      if (!o.note.empty()) jo["note"] = o.note;
      if (!o.witness.empty()) jo["witness"] = assignment_to_json(o.witness);
      if (o.verdict != Equiv::Equal) {
        if (!o.spec_term.null()) jo["spec_term"] = to_string(o.spec_term);
        if (!o.impl_term.null()) jo["impl_term"] = to_string(o.impl_term);
      }
      outs.push_back(std::move(jo));
    }
    s["outcomes"] = std::move(outs);
    scs.push_back(std::move(s));
  }
  out["scenarios"] = std::move(scs);
  if (loc && !loc->groups.empty()) {
    json jl;
    jl["suspected_block"] = loc->suspected_block;
    jl["suspected_scenarios"] = loc->suspected_scenarios;
    jl["low_confidence"] = loc->low_confidence;
    json groups = json::array();
    for (const auto &g : loc->groups) {
      json jg;
      jg["block"] = g.block;
      jg["signals"] = g.signals;
      jg["scenarios"] = g.scenarios;
      groups.push_back(std::move(jg));
    }
    jl["groups"] = std::move(groups);
    out["localization"] = std::move(jl);
  }
  return out;
}

nlohmann::json prop_to_json(const PropVerdict &v) {
  json out;
  out["property"] = v.property;
  out["model"] = v.model;
  out["outcome"] = to_cstr(v.outcome);
  out["wall_ms"] = v.wall_ms;
  json scs = json::array();
  for (const ScenarioPropResult &sc : v.scenarios) {
    json s;
    s["scenario"] = sc.scenario;
    s["outcome"] = to_cstr(sc.outcome);
    s["skipped"] = sc.skipped;
    if (!sc.note.empty()) s["note"] = sc.note;
    if (sc.counterexample) s["counterexample"] = counterexample_to_json(*sc.counterexample);
    s["wall_ms"] = sc.wall_ms;
    s["node_count"] = sc.node_count;
    scs.push_back(std::move(s));
  }
  out["scenarios"] = std::move(scs);
  if (v.counterexample) out["counterexample"] = counterexample_to_json(*v.counterexample);
  return out;
}

nlohmann::json suite_to_json(const std::vector<SuiteCell> &cells) {
  json out = json::array();
  for (const SuiteCell &c : cells) {
    json jc;
    jc["model"] = c.model;
    jc["property"] = c.property;
    jc["scenario_set"] = c.scenario_set;
    jc["verdict"] = prop_to_json(c.verdict);
    out.push_back(std::move(jc));
  }
  return out;
}

void PhaseTimer::record(const std::string &phase, double wall_ms) {
  phases[phase] = wall_ms;
}

nlohmann::json make_report(const std::string &command, const nlohmann::json &inputs,
                           const nlohmann::json &body, const nlohmann::json &phases) {
  json out;
  out["tool"] = "sre";
  out["version"] = kToolVersion;
  out["command"] = command;
  out["inputs"] = inputs;
  out["phases"] = phases;
  out["peak_rss_bytes"] = peak_rss_bytes();
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out;
}

void emit_report(const nlohmann::json &report, const std::string &out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << report.dump(2) << std::endl;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open report path " + out_path);
  f << report.dump(2) << "\n";
}

}  // namespace sre
