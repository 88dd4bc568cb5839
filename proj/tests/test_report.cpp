#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "sre/equivcheck.hpp"
#include "sre/report.hpp"
#include "sre/wimax.hpp"

using namespace sre;
using nlohmann::json;

namespace {

// Strips the nondeterministic measurement fields so two runs of the same
// job can be compared verdict-to-verdict.
void scrub_timing(json &j) {
  if (j.is_object()) {
    j.erase("wall_ms");
    j.erase("total_wall_ms");
    j.erase("peak_rss_bytes");
    j.erase("node_count");
    j.erase("final_node_count");
    j.erase("delta_cycles");
    for (auto &[key, val] : j.items()) scrub_timing(val);
  } else if (j.is_array()) {
    for (auto &val : j) scrub_timing(val);
  }
}

}  // namespace

TEST_CASE("reports carry the command, inputs, phases, and tool identity") {
  PhaseTimer timer;
  timer.record("parse", 1.5);
  timer.record("match", 2.0);
  json body;
  body["verdict"] = "ok";
  json r = make_report("equiv", json{{"job", "x"}}, body, timer.phases);
  CHECK(r["tool"] == "sre");
  CHECK(r.contains("version"));
  CHECK(r["command"] == "equiv");
  CHECK(r["inputs"]["job"] == "x");
  CHECK(r["phases"]["parse"] == 1.5);
  CHECK(r["phases"]["match"] == 2.0);
  CHECK(r["verdict"] == "ok");
  CHECK(r.contains("peak_rss_bytes"));
}

TEST_CASE("trace serialization exposes rows, bindings, and statistics") {
  SimConfig cfg;
  cfg.steps = 1;
  cfg.mode = SimMode::Numerical;
  cfg.funcs = &wimax_registry();
  cfg.input_bindings = concrete_inputs({true, false, true, true, false, false, true, false});
  cfg.bind_scenario(mode_by_name("mode_0").scenario(8));
  Trace tr = run(build_model(WimaxLevel::FL, 8), cfg);
  json j = trace_to_json(tr);
  CHECK(j["cycles"] == 1);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["t"] == tr.t0);
  CHECK(j["rows"][1].contains("bindings"));
  CHECK(j["rows"][1]["bindings"].contains("out.frame"));
  CHECK(j.contains("total_wall_ms"));
  CHECK(j.contains("final_node_count"));
}

TEST_CASE("verdict sections are identical across repeated runs") {
  SreSystem fl = build_model(WimaxLevel::FL, 8);
  SreSystem ptl8 = build_model(WimaxLevel::PTL8, 8);
  EquivJob job;
  job.name = "repeat";
  job.spec = &fl;
  job.impl = &ptl8;
  job.abstraction = wimax_abstraction(WimaxLevel::PTL8);
  job.scenarios = all_scenarios(8);
  job.input_bindings = symbolic_inputs(8);
  job.funcs = &wimax_registry();

  json a = equiv_to_json(check_equivalence(job));
  json b = equiv_to_json(check_equivalence(job));
  scrub_timing(a);
  scrub_timing(b);
  CHECK(a == b);
  CHECK(a["overall"] == "equivalent");
}

TEST_CASE("reports write to a file on request") {
  std::string path = "report_test_tmp.json";
  json r = make_report("validate", json::array(), json{{"verdict", "valid"}}, json::object());
  emit_report(r, path);
  std::ifstream f(path);
  REQUIRE(f.good());
  json back;
  f >> back;
  CHECK(back["command"] == "validate");
  f.close();
  std::remove(path.c_str());

  CHECK_THROWS(emit_report(r, "/no/such/dir/report.json"));
}

TEST_CASE("counterexamples serialize every field the replayer needs") {
  Counterexample ce;
  ce.property = "p";
  ce.scenario = "mode_1";
  ce.signal = "rand.out";
  ce.index = 3;
  ce.value_text = "true";
  ce.witness["b0"] = Value::boolean(true);
  ce.failed_term = Term::boolean(false);
  json j = counterexample_to_json(ce);
  CHECK(j["property"] == "p");
  CHECK(j["scenario"] == "mode_1");
  CHECK(j["signal"] == "rand.out");
  CHECK(j["index"] == 3);
  CHECK(j["value"] == "true");
  CHECK(j["witness"].contains("b0"));
  CHECK(j.contains("failed_term"));
}
