#pragma once

#include <string>

#include <json.hpp>

#include "sre/equivcheck.hpp"
#include "sre/propcheck.hpp"
#include "sre/sim.hpp"

namespace sre {

inline constexpr const char *kToolVersion = "0.1.0";

// Current process peak resident set size in bytes, 0 when unavailable.
uint64_t peak_rss_bytes();

// Stable machine-readable report fragments. Every CLI run emits exactly one
// report object: {tool, version, command, inputs, phases, ...verdict fields}.
nlohmann::json trace_to_json(const Trace &trace);
nlohmann::json equiv_to_json(const EquivVerdict &v, const Localization *loc = nullptr);
nlohmann::json prop_to_json(const PropVerdict &v);
nlohmann::json suite_to_json(const std::vector<SuiteCell> &cells);
nlohmann::json counterexample_to_json(const Counterexample &ce);

struct PhaseTimer {
  nlohmann::json phases = nlohmann::json::object();
  void record(const std::string &phase, double wall_ms);
};

nlohmann::json make_report(const std::string &command, const nlohmann::json &inputs,
                           const nlohmann::json &body, const nlohmann::json &phases);

// Writes to the path, or standard output when path is empty or "-".
void emit_report(const nlohmann::json &report, const std::string &out_path);

}  // namespace sre
