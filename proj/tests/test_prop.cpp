#include <doctest.h>

#include "sre/propcheck.hpp"
#include "sre/wimax.hpp"

using namespace sre;

namespace {

CheckOptions options_for(const Abstraction *abs, int width = 8) {
  CheckOptions opts;
  opts.funcs = &wimax_registry();
  opts.abstraction = abs;
  opts.input_bindings = symbolic_inputs(width);
  return opts;
}

const Property &prop_named(const std::vector<Property> &ps, const std::string &name) {
  for (const Property &p : ps)
    if (p.name == name) return p;
  REQUIRE_MESSAGE(false, "no property named " << name);
  static Property dummy;
  return dummy;
}

}  // namespace

TEST_CASE("all bundled properties hold on the clean flat model") {
  SreSystem fl = build_model(WimaxLevel::FL, 8);
  Abstraction abs = wimax_abstraction(WimaxLevel::FL);
  CheckOptions opts = options_for(&abs);
  for (const Property &p : wimax_properties(8)) {
    PropVerdict v = check_property(fl, p, all_scenarios(8), opts);
    CHECK_MESSAGE(v.outcome == PropOutcome::Holds, p.name << ": " << to_cstr(v.outcome));
    CHECK_FALSE(v.counterexample.has_value());
  }
}

TEST_CASE("control-guarded clauses skip scenarios bound to other values") {
  SreSystem fl = build_model(WimaxLevel::FL, 8);
  Abstraction abs = wimax_abstraction(WimaxLevel::FL);
  CheckOptions opts = options_for(&abs);
  std::vector<Property> props = wimax_properties(8);
  const Property &p12 = prop_named(props, "p3_keep_rate12");

  // modes 3 and 4 run rate 2/3 — the rate-1/2 clause does not apply there
  std::vector<Scenario> others = {mode_by_name("mode_3").scenario(8),
                                  mode_by_name("mode_4").scenario(8)};
  PropVerdict v = check_property(fl, p12, others, opts);
  CHECK(v.outcome == PropOutcome::Holds);
  for (const auto &sc : v.scenarios) CHECK(sc.skipped);
}

TEST_CASE("a severed stage line fails the no-invalid-data property with a replayable witness") {
  std::vector<Property> props = wimax_properties(8);
  for (WimaxLevel level : {WimaxLevel::FL, WimaxLevel::PTL8, WimaxLevel::PTL4}) {
    SreSystem buggy = inject(build_model(level, 8), level, "B2").model;
    Abstraction abs = wimax_abstraction(level);
    CheckOptions opts = options_for(&abs);
    const Property &p1 = prop_named(props, "p1_no_invalid");
    PropVerdict v = check_property(buggy, p1, all_scenarios(8), opts);
    REQUIRE_MESSAGE(v.outcome == PropOutcome::Fails, to_cstr(level));
    REQUIRE(v.counterexample.has_value());
    const Counterexample &ce = *v.counterexample;
    CHECK(ce.property == "p1_no_invalid");
    CHECK(ce.signal == "ilv.out");
    CHECK_FALSE(ce.scenario.empty());
    CHECK_FALSE(ce.value_text.empty());
    CHECK(replay_counterexample(buggy, p1, ce, all_scenarios(8), opts));
  }
}

TEST_CASE("the rotated randomizer reference fails the xor property at a named bit") {
  SreSystem buggy = inject(build_model(WimaxLevel::FL, 8), WimaxLevel::FL, "B3").model;
  Abstraction abs = wimax_abstraction(WimaxLevel::FL);
  CheckOptions opts = options_for(&abs);
  std::vector<Property> props = wimax_properties(8);
  const Property &p2 = prop_named(props, "p2_randomizer_xor");
  PropVerdict v = check_property(buggy, p2, all_scenarios(8), opts);
  REQUIRE(v.outcome == PropOutcome::Fails);
  REQUIRE(v.counterexample.has_value());
  CHECK(v.counterexample->signal == "rand.out");
  CHECK(v.counterexample->index.has_value());
  CHECK(replay_counterexample(buggy, p2, *v.counterexample, all_scenarios(8), opts));

  // the clean model keeps the property
  SreSystem clean = build_model(WimaxLevel::FL, 8);
  CHECK(check_property(clean, p2, all_scenarios(8), opts).outcome == PropOutcome::Holds);
}

TEST_CASE("replaying against a scenario list missing the witness scenario is an error") {
  SreSystem buggy = inject(build_model(WimaxLevel::FL, 8), WimaxLevel::FL, "B2").model;
  Abstraction abs = wimax_abstraction(WimaxLevel::FL);
  CheckOptions opts = options_for(&abs);
  std::vector<Property> props = wimax_properties(8);
  const Property &p1 = prop_named(props, "p1_no_invalid");
  PropVerdict v = check_property(buggy, p1, all_scenarios(8), opts);
  REQUIRE(v.counterexample.has_value());
  std::vector<Scenario> empty;
  CHECK_THROWS_AS(replay_counterexample(buggy, p1, *v.counterexample, empty, opts),
                  std::invalid_argument);
}

TEST_CASE("the full model-property matrix runs cellwise, serial or pooled") {
  SreSystem fl = build_model(WimaxLevel::FL, 8);
  SreSystem ptl8 = build_model(WimaxLevel::PTL8, 8);
  SreSystem ptl4 = build_model(WimaxLevel::PTL4, 8);
  Abstraction a_fl = wimax_abstraction(WimaxLevel::FL);
  Abstraction a_p8 = wimax_abstraction(WimaxLevel::PTL8);
  Abstraction a_p4 = wimax_abstraction(WimaxLevel::PTL4);
  std::vector<SuiteModel> models = {
      {"wimax_fl", &fl, &a_fl, symbolic_inputs(8)},
      {"wimax_ptl8", &ptl8, &a_p8, symbolic_inputs(8)},
      {"wimax_ptl4", &ptl4, &a_p4, symbolic_inputs(8)},
  };
  std::vector<Property> props = wimax_properties(8);
  std::vector<std::pair<std::string, std::vector<Scenario>>> sets = {
      {"single", single_scenario(8)},
      {"all_modes", all_scenarios(8)},
  };
  CheckOptions opts;
  opts.funcs = &wimax_registry();

  opts.jobs = 1;
  auto serial = property_suite(models, props, sets, opts);
  REQUIRE(serial.size() == models.size() * props.size() * sets.size());
  for (const SuiteCell &c : serial)
    CHECK_MESSAGE(c.verdict.outcome == PropOutcome::Holds,
                  c.model << " / " << c.property << " / " << c.scenario_set);

  opts.jobs = 4;
  auto pooled = property_suite(models, props, sets, opts);
  REQUIRE(pooled.size() == serial.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(pooled[i].model == serial[i].model);
    CHECK(pooled[i].property == serial[i].property);
    CHECK(pooled[i].verdict.outcome == serial[i].verdict.outcome);
  }
}
