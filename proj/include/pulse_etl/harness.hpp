#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pulse_etl/scenario.hpp"
#include "pulse_etl/stopping_time.hpp"

namespace pulse_etl {

/// One communication event. Column order matches the CSV export.
struct EventRow {
    std::size_t event_index = 0;
    double t_s = 0.0;
    double x_trigger = 0.0;
    double pulse_amp = 0.0;
    double pulse_dur_s = 0.0;
    double tau_s = 0.0;
    double window_mean_s = 0.0;
    double expected_tau_s = 0.0;
    double kappa_s = 0.0;
    bool gamma_learn = false;
    ContinuousModel model; // controller's model when the event fired
};

struct LearningRecord {
    std::size_t trigger_event = 0; // event index where gamma_learn fired
    double trigger_t_s = 0.0;
    std::size_t installed_after_event = 0; // events recorded when the model was swapped in
    double install_t_s = 0.0;
    std::size_t n_samples = 0;
    ContinuousModel model;
    ExpectedTau expected;
    double sigma0 = 0.0;
};

struct LogMessage {
    std::size_t event_index = 0;
    double t_s = 0.0;
    std::string text;
};

struct EventLog {
    std::vector<EventRow> rows;
    std::vector<LearningRecord> learnings;
    /// Event counts at which the true plant changed (event-scheduled or not).
    std::vector<std::size_t> truth_changes;
    std::vector<LogMessage> errors;
    std::size_t error_count = 0; // may exceed errors.size(); messages are capped
    std::size_t clipped_pulses = 0;
    ExpectedTau initial_expected;
    double end_t_s = 0.0;
};

/// Runs the closed loop: true plant, state trigger, pulse controller,
/// learning trigger and re-identification. Deterministic in the seed.
/// Throws ConfigError on invalid scenarios; run-time failures (e.g. a
/// pulse cannot be planned, a fit is rank deficient) are logged in
/// EventLog::errors and the loop continues.
[[nodiscard]] EventLog run_scenario(const Scenario& scenario);

/// Trailing mean over up to `window` values; the average restarts at every
/// index listed in `resets` (the value at that index starts the new run).
[[nodiscard]] std::vector<double> moving_average(std::span<const double> taus, std::size_t window,
                                                 std::span<const std::size_t> resets = {});

inline constexpr const char* csv_header =
    "event_index,t_s,x_trigger,pulse_amp,pulse_dur_s,tau_s,window_mean_s,expected_tau_s,kappa_s,gamma_learn,"
    "model_a,model_b,model_eps,model_q";

void write_csv(const EventLog& log, std::ostream& out);
/// Throws IoError naming the path on failure.
void export_csv(const EventLog& log, const std::filesystem::path& path);

} // namespace pulse_etl
