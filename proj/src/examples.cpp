#include "pulse_etl/examples.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "pulse_etl/errors.hpp"
#include "pulse_etl/noise.hpp"

namespace pulse_etl {

namespace {

constexpr double study_delta = 0.02;
constexpr double study_dt = 1e-3;

Scenario study_defaults(std::string name, std::uint64_t seed) {
    Scenario s;
    s.name = std::move(name);
    s.disturbance_entry = DisturbanceEntry::input_side;
    s.state_trigger.delta = study_delta;
    s.learn_trigger = LearnTriggerConfig::make(0.05, 2000, 10000, 1.0);
    s.mc.m_sim = 10000;
    s.mc.dt = study_dt;
    s.mc.tau_max = 1.0;
    s.dt = study_dt;
    s.seed = seed;
    return s;
}

ContinuousModel input_side(double a, double b, double load, double q) {
    return ContinuousModel{a, b, make_effective_disturbance(load, DisturbanceEntry::input_side, b), q};
}

std::vector<Scenario> example1(std::uint64_t seed) {
    Scenario s = study_defaults("example1", derive_seed(seed, 1000));
    const ContinuousModel initial = input_side(-0.01, -0.01, 5.0, 1e-4);
    s.truth_schedule = {
        ScheduleEntry{std::size_t{0}, std::nullopt, initial},
        ScheduleEntry{std::size_t{2000}, std::nullopt, input_side(-0.01, -0.01, 10.0, 1e-4)},
        ScheduleEntry{std::size_t{7000}, std::nullopt, input_side(-0.05, -0.05, 20.0, 1e-4)},
    };
    s.nominal_model = initial;
    s.actuator.u_max = 100.0;
    s.learning_policy = LearningPolicy{LearningPolicyKind::fresh_window, 200.0};
    s.horizon_events = 12000;
    return {s};
}

constexpr std::size_t benchmark_horizon = 5000;

std::vector<Scenario> example2(std::uint64_t seed) {
    // Column 1 plants start from the a = b = -1 model, column 2 from -0.1.
    const std::array<double, 5> system1_ab{-10.0, -4.0 / 3.0, -0.5, -0.25, -1.0 / 6.0};
    const std::array<double, 5> system2_ab{-0.25, -0.05, -0.02, -0.01, -0.005};

    std::mt19937_64 rng(derive_seed(seed, 2));
    std::uniform_real_distribution<double> q_dist(1e-4, 1e-3);
    std::uniform_real_distribution<double> eps1_dist(0.1, 0.2);
    std::uniform_real_distribution<double> eps2_dist(1.0, 5.0);

    std::vector<Scenario> out;
    for (int column = 0; column < 2; ++column) {
        const auto& ab = column == 0 ? system1_ab : system2_ab;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            const double q = q_dist(rng);
            const double eps = column == 0 ? eps1_dist(rng) : eps2_dist(rng);
            char name[64];
            std::snprintf(name, sizeof name, "example2-system%d-ab%g", column + 1, ab[i]);
            Scenario s = study_defaults(name, derive_seed(seed, 2000 + out.size()));
            s.truth_schedule = {ScheduleEntry{std::size_t{0}, std::nullopt, input_side(ab[i], ab[i], eps, q)}};
            if (column == 0) {
                s.nominal_model = input_side(-1.0, -1.0, 0.1, 1e-4);
                s.actuator.u_max = 1.0;
            } else {
                s.nominal_model = input_side(-0.1, -0.1, 1.0, 1e-4);
                s.actuator.u_max = 100.0;
            }
            s.learning_policy = LearningPolicy{LearningPolicyKind::all_data, 0.0};
            s.horizon_events = benchmark_horizon;
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<Scenario> example3(std::uint64_t seed) {
    std::mt19937_64 rng(derive_seed(seed, 3));
    std::uniform_real_distribution<double> a_dist(1.0, 10.0);
    std::uniform_real_distribution<double> b_dist(1.0, 2.0);
    std::uniform_real_distribution<double> eps_dist(0.01, 0.02);
    std::uniform_real_distribution<double> q_dist(1e-4, 1e-3);

    std::vector<Scenario> out;
    for (int i = 0; i < 10; ++i) {
        const double a = a_dist(rng);
        const double b = b_dist(rng);
        const double eps = eps_dist(rng);
        const double q = q_dist(rng);
        Scenario s = study_defaults("example3-system" + std::to_string(i + 1), derive_seed(seed, 3000 + i));
        s.truth_schedule = {ScheduleEntry{std::size_t{0}, std::nullopt, input_side(a, b, eps, q)}};
        s.nominal_model = input_side(5.0, 3.0, 0.01, 1e-4);
        s.actuator.u_max = 1.0;
        s.learning_policy = LearningPolicy{LearningPolicyKind::all_data, 0.0};
        s.horizon_events = benchmark_horizon;
        out.push_back(std::move(s));
    }
    return out;
}

double mean_tau(const EventLog& log, std::size_t first_event, std::size_t last_event) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const EventRow& r : log.rows) {
        if (r.event_index >= first_event && r.event_index <= last_event) {
            sum += r.tau_s;
            ++n;
        }
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

} // namespace

std::vector<Scenario> example_scenarios(int example, std::uint64_t seed) {
    switch (example) {
    case 1:
        return example1(seed);
    case 2:
        return example2(seed);
    case 3:
        return example3(seed);
    default:
        throw ConfigError("unknown example id " + std::to_string(example) + " (expected 1, 2 or 3)");
    }
}

std::vector<LearningSummary> summarize_learning(const EventLog& log) {
    std::vector<LearningSummary> out;
    const std::size_t total = log.rows.empty() ? 0 : log.rows.back().event_index;
    for (std::size_t j = 0; j < log.learnings.size(); ++j) {
        const LearningRecord& rec = log.learnings[j];
        std::size_t start = j == 0 ? 0 : log.learnings[j - 1].installed_after_event;
        for (const std::size_t change : log.truth_changes) {
            if (change < rec.trigger_event) {
                start = std::max(start, change);
            }
        }
        std::size_t end = total;
        if (j + 1 < log.learnings.size()) {
            end = log.learnings[j + 1].trigger_event - 1;
        }
        for (const std::size_t change : log.truth_changes) {
            if (change >= rec.installed_after_event) {
                end = std::min(end, change);
            }
        }

        LearningSummary sum;
        sum.learning_index = j;
        sum.mean_before_s = mean_tau(log, start + 1, rec.trigger_event);
        sum.events_before = rec.trigger_event - start;
        sum.mean_after_s = mean_tau(log, rec.installed_after_event + 1, end);
        sum.events_after = end > rec.installed_after_event ? end - rec.installed_after_event : 0;
        sum.expected_before_s = j == 0 ? log.initial_expected.mean : log.learnings[j - 1].expected.mean;
        sum.expected_after_s = rec.expected.mean;
        out.push_back(sum);
    }
    return out;
}

ExampleReport replicate_example(int example, std::uint64_t seed) {
    ExampleReport report;
    report.example = example;
    report.seed = seed;
    for (Scenario& s : example_scenarios(example, seed)) {
        SystemReport sys;
        sys.log = run_scenario(s);
        sys.learning = summarize_learning(sys.log);
        sys.scenario = std::move(s);
        report.systems.push_back(std::move(sys));
    }
    return report;
}

void print_report(const ExampleReport& report, std::ostream& out) {
    char line[256];
    out << "example " << report.example << " (seed " << report.seed << ")\n";
    for (const SystemReport& sys : report.systems) {
        const ContinuousModel& truth = sys.scenario.truth_schedule.front().model;
        std::snprintf(line, sizeof line, "%s: a=%.4g b=%.4g eps_eff=%.4g q=%.3g, %zu events, %zu learning step(s)\n",
                      sys.scenario.name.c_str(), truth.a, truth.b, truth.eps_eff, truth.q, sys.log.rows.size(),
                      sys.log.learnings.size());
        out << line;
        if (sys.learning.empty() && !sys.log.rows.empty()) {
            std::snprintf(line, sizeof line, "  no learning triggered: mean %.1f ms (E %.1f ms)\n",
                          1e3 * mean_tau(sys.log, 1, sys.log.rows.back().event_index),
                          1e3 * sys.log.initial_expected.mean);
            out << line;
        }
        for (const LearningSummary& l : sys.learning) {
            std::snprintf(line, sizeof line,
                          "  learning %zu: before %.1f ms (E %.1f ms, %zu events) -> after %.1f ms (E %.1f ms, %zu "
                          "events)\n",
                          l.learning_index + 1, 1e3 * l.mean_before_s, 1e3 * l.expected_before_s, l.events_before,
                          1e3 * l.mean_after_s, 1e3 * l.expected_after_s, l.events_after);
            out << line;
        }
        if (sys.log.error_count > 0) {
            out << "  " << sys.log.error_count << " run-time error(s); first: " << sys.log.errors.front().text << '\n';
        }
    }
}

} // namespace pulse_etl
