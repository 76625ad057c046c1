#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pulse_etl/pulse.hpp"
#include "pulse_etl/sde.hpp"
#include "pulse_etl/stopping_time.hpp"
#include "pulse_etl/triggers.hpp"

namespace pulse_etl {

/// True plant active from the given point on. Exactly one of at_event
/// (number of recorded events) or at_time_s is set.
struct ScheduleEntry {
    std::optional<std::size_t> at_event;
    std::optional<double> at_time_s;
    ContinuousModel model;
};

enum class LearningPolicyKind { fresh_window, all_data };

struct LearningPolicy {
    LearningPolicyKind kind = LearningPolicyKind::all_data;
    double window_s = 200.0; // fresh_window only
};

struct Scenario {
    std::string name = "scenario";
    /// First entry activates at event 0 / time 0; models carry eps_eff.
    std::vector<ScheduleEntry> truth_schedule;
    ContinuousModel nominal_model;
    DisturbanceEntry disturbance_entry = DisturbanceEntry::additive;
    StateTriggerConfig state_trigger;
    ActuatorLimits actuator;
    LearnTriggerConfig learn_trigger = LearnTriggerConfig::make(0.05, 2000, 10000, 1.0);
    /// m_sim and dt are used as given; tau_max, sigma0 and seed are filled in per estimate.
    McConfig mc;
    LearningPolicy learning_policy;
    double dt = 1e-3;
    std::size_t horizon_events = 0; // 0 = no event limit
    double horizon_s = 0.0;         // 0 = no time limit
    std::uint64_t seed = 0;

    /// Throws ConfigError.
    void validate() const;
};

/// Parses the key/value scenario format (see docs/scenario_format.md).
/// Throws ConfigError with the offending line on malformed input.
[[nodiscard]] Scenario parse_scenario(std::istream& in);
[[nodiscard]] Scenario parse_scenario_text(const std::string& text);
/// Throws IoError if the file cannot be read.
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

[[nodiscard]] const char* to_string(DisturbanceEntry entry) noexcept;
[[nodiscard]] const char* to_string(LearningPolicyKind kind) noexcept;

} // namespace pulse_etl
