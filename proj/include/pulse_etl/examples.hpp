#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pulse_etl/harness.hpp"
#include "pulse_etl/scenario.hpp"

namespace pulse_etl {

/// Mean inter-communication time around one learning step.
struct LearningSummary {
    std::size_t learning_index = 0;
    double mean_before_s = 0.0; // since the later of last install / truth change, up to the trigger
    double mean_after_s = 0.0;  // from install until the next trigger, truth change or end
    std::size_t events_before = 0;
    std::size_t events_after = 0;
    double expected_before_s = 0.0;
    double expected_after_s = 0.0;
};

struct SystemReport {
    Scenario scenario;
    EventLog log;
    std::vector<LearningSummary> learning;
};

struct ExampleReport {
    int example = 0;
    std::uint64_t seed = 0;
    std::vector<SystemReport> systems;
};

/// Scenarios for the three numerical-study examples (1: single stable plant
/// with two dynamics changes; 2: ten stable plants with wrong initial
/// models; 3: ten unstable plants). True parameters of examples 2 and 3 are
/// drawn from their intervals using `seed`. Throws ConfigError for other ids.
[[nodiscard]] std::vector<Scenario> example_scenarios(int example, std::uint64_t seed);

[[nodiscard]] std::vector<LearningSummary> summarize_learning(const EventLog& log);

[[nodiscard]] ExampleReport replicate_example(int example, std::uint64_t seed);

void print_report(const ExampleReport& report, std::ostream& out);

} // namespace pulse_etl
