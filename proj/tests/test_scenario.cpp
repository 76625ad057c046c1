#include "doctest.h"

#include <string>

#include "pulse_etl/errors.hpp"
#include "pulse_etl/scenario.hpp"

using namespace pulse_etl;

namespace {

const std::string minimal = R"(
truth.a = -0.01
truth.b = -0.01
truth.eps = 5      # load, folded through b
truth.q = 1e-4
truth.entry_mode = input_side
actuator.u_max = 100
sim.horizon_events = 10
)";

} // namespace

TEST_CASE("minimal scenario with defaults") {
    const Scenario s = parse_scenario_text(minimal);
    REQUIRE(s.truth_schedule.size() == 1);
    CHECK(s.truth_schedule[0].model.eps_eff == doctest::Approx(-0.05));
    CHECK(s.nominal_model == s.truth_schedule[0].model);
    CHECK(s.state_trigger.delta == 0.02);
    CHECK(s.learn_trigger.n_window == 2000);
    CHECK(s.learn_trigger.m_sim == 10000);
    CHECK(s.learn_trigger.kappa == doctest::Approx(0.0661968778317670));
    CHECK(s.mc.m_sim == 10000);
    CHECK(s.mc.dt == 1e-3);
    CHECK(s.dt == 1e-3);
    CHECK(s.learning_policy.kind == LearningPolicyKind::all_data);
    CHECK(s.seed == 0);
}

TEST_CASE("schedule entries inherit omitted parameters") {
    const Scenario s = parse_scenario_text(minimal + R"(
schedule.1.at_event = 2000
schedule.1.eps = 10
schedule.2.at_event = 7000
schedule.2.a = -0.05
schedule.2.b = -0.05
schedule.2.eps = 20
learning.policy = fresh_window
learning.window_s = 200
seed = 42
)");
    REQUIRE(s.truth_schedule.size() == 3);
    CHECK(*s.truth_schedule[1].at_event == 2000);
    CHECK(s.truth_schedule[1].model.a == -0.01);
    CHECK(s.truth_schedule[1].model.eps_eff == doctest::Approx(-0.1));
    CHECK(s.truth_schedule[2].model.eps_eff == doctest::Approx(-1.0));
    CHECK(s.truth_schedule[2].model.q == 1e-4);
    CHECK(s.learning_policy.kind == LearningPolicyKind::fresh_window);
    CHECK(s.learning_policy.window_s == 200.0);
    CHECK(s.seed == 42);
}

TEST_CASE("time-based schedule") {
    const Scenario s = parse_scenario_text(minimal + "schedule.1.at_s = 5\nschedule.1.eps = 8\n");
    CHECK(s.truth_schedule[0].at_time_s.has_value());
    CHECK(*s.truth_schedule[1].at_time_s == 5.0);
}

TEST_CASE("malformed scenarios are rejected") {
    CHECK_THROWS_AS((void)parse_scenario_text(minimal + "bogus.key = 1\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_scenario_text(minimal + "truth.a = 2\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_scenario_text(minimal + "trigger.delta = abc\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_scenario_text(minimal + "no equals sign\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_scenario_text(minimal + "learn.eta = 1.2\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_scenario_text(minimal + "learn.M = 100\nlearn.N = 200\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_scenario_text(minimal + "truth.q = -1\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_scenario_text(minimal + "actuator.u_max = 0\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_scenario_text(minimal + "truth.entry_mode = sideways\n"), ConfigError);
    CHECK_THROWS_AS(
        (void)parse_scenario_text(minimal + "schedule.1.at_event = 50\nschedule.2.at_event = 20\nschedule.2.a = 1\n"),
        ConfigError);
    CHECK_THROWS_AS((void)parse_scenario_text(minimal + "schedule.x.at_event = 5\n"), ConfigError);
    CHECK_THROWS_AS(
        (void)parse_scenario_text("truth.a = -1\ntruth.b = 1\n"), // no horizon
        ConfigError);
}

TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS((void)load_scenario("/nonexistent/path.scn"), IoError);
}
