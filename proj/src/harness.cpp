#include "pulse_etl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "pulse_etl/errors.hpp"
#include "pulse_etl/noise.hpp"
#include "pulse_etl/sysid.hpp"

namespace pulse_etl {

namespace {

// Pulse ends closer than this to a grid point are treated as on it.
constexpr double time_snap = 1e-9;
constexpr std::size_t max_logged_errors = 1000;

class ClosedLoop {
public:
    explicit ClosedLoop(const Scenario& s)
        : s_(s),
          noise_(s.seed, 0),
          window_(s.learn_trigger.n_window, s.learn_trigger.tau_max) {
        data_.dt = s.dt;
        set_truth(s.truth_schedule.front().model);
        controller_ = s.nominal_model;
        try {
            expected_ = expected_for(controller_, 0);
        } catch (const InsufficientAuthority& e) {
            throw ConfigError(std::string("nominal model: ") + e.what());
        }
        log_.initial_expected = expected_;
    }

    EventLog run() {
        while (!done()) {
            apply_time_schedule();
            advance_one_step();
            if (collecting_ && t_ >= collect_until_ - time_snap) {
                learn();
            }
            if (!pulse_active_) {
                check_for_event();
            }
        }
        log_.end_t_s = t_;
        return std::move(log_);
    }

private:
    bool done() const {
        if (s_.horizon_events > 0 && events_ >= s_.horizon_events) {
            return true;
        }
        return s_.horizon_s > 0.0 && t_ >= s_.horizon_s - time_snap;
    }

    void set_truth(const ContinuousModel& model) {
        truth_ = model;
        truth_disc_ = discretize(truth_, s_.dt);
    }

    void apply_time_schedule() {
        while (next_truth_ < s_.truth_schedule.size() && s_.truth_schedule[next_truth_].at_time_s &&
               *s_.truth_schedule[next_truth_].at_time_s <= t_ + time_snap) {
            if (next_truth_ > 0) {
                log_.truth_changes.push_back(events_);
            }
            set_truth(s_.truth_schedule[next_truth_].model);
            ++next_truth_;
        }
    }

    void apply_event_schedule() {
        while (next_truth_ < s_.truth_schedule.size() && s_.truth_schedule[next_truth_].at_event &&
               *s_.truth_schedule[next_truth_].at_event <= events_) {
            if (next_truth_ > 0) {
                log_.truth_changes.push_back(events_);
            }
            set_truth(s_.truth_schedule[next_truth_].model);
            ++next_truth_;
        }
    }

    void advance_one_step() {
        double on_fraction = 0.0;
        if (pulse_active_) {
            on_fraction = std::clamp((pulse_end_ - t_) / s_.dt, 0.0, 1.0);
        }
        const double amp = pulse_active_ ? amplitude_ : 0.0;
        const double x_next = step_partial_input(truth_, truth_disc_, x_, amp, on_fraction, noise_.next());
        if (keep_all_data() || collecting_) {
            data_.samples.push_back(Sample{x_, amp * on_fraction, x_next});
        }
        x_ = x_next;
        ++steps_;
        t_ = static_cast<double>(steps_) * s_.dt;

        if (pulse_active_ && pulse_end_ <= t_ + time_snap) {
            pulse_active_ = false;
            t_reset_ = std::abs(pulse_end_ - t_) <= time_snap ? t_ : pulse_end_;
        }
    }

    void check_for_event() {
        const double elapsed = t_ - t_reset_;
        if (elapsed <= 0.0) {
            return;
        }
        const bool forced = elapsed >= s_.learn_trigger.tau_max - time_snap;
        if (!forced && !state_trigger(x_, s_.state_trigger)) {
            return;
        }

        ++events_;
        EventRow row;
        row.event_index = events_;
        row.t_s = t_;
        row.x_trigger = x_;
        row.tau_s = std::min(elapsed, s_.learn_trigger.tau_max);
        window_.record(row.tau_s);
        if (!collecting_ && window_.full()) {
            row.gamma_learn = learn_trigger(window_, expected_.mean, s_.learn_trigger);
        }
        row.window_mean_s = window_.mean();
        row.expected_tau_s = expected_.mean;
        row.kappa_s = s_.learn_trigger.kappa;
        row.model = controller_;

        PulseCommand cmd;
        try {
            cmd = plan_pulse(controller_, x_, s_.actuator, s_.learn_trigger.tau_max);
        } catch (const InsufficientAuthority& e) {
            record_error(e.what());
        }
        if (cmd.clipped) {
            ++log_.clipped_pulses;
        }
        row.pulse_amp = cmd.amplitude;
        row.pulse_dur_s = cmd.duration;
        log_.rows.push_back(row);

        if (cmd.duration > 0.0) {
            pulse_active_ = true;
            pulse_end_ = t_ + cmd.duration;
            amplitude_ = cmd.amplitude;
        } else {
            t_reset_ = t_;
        }

        if (row.gamma_learn) {
            window_.reset();
            pending_trigger_event_ = events_;
            pending_trigger_t_ = t_;
            if (s_.learning_policy.kind == LearningPolicyKind::all_data) {
                learn();
            } else {
                collecting_ = true;
                collect_until_ = t_ + s_.learning_policy.window_s;
                data_.samples.clear();
            }
        }
        apply_event_schedule();
    }

    void learn() {
        collecting_ = false;
        try {
            const LsEstimate est = least_squares_fit(data_, DisturbanceMode::load_disturbance);
            const ContinuousModel learned = to_continuous(est, s_.dt);
            LearningRecord rec;
            rec.expected = expected_for(learned, log_.learnings.size() + 1);
            rec.sigma0 = last_sigma0_;
            rec.trigger_event = pending_trigger_event_;
            rec.trigger_t_s = pending_trigger_t_;
            rec.installed_after_event = events_;
            rec.install_t_s = t_;
            rec.n_samples = est.n_samples;
            rec.model = learned;
            controller_ = learned;
            expected_ = rec.expected;
            window_.reset();
            log_.learnings.push_back(rec);
        } catch (const Error& e) {
            record_error(std::string("learning failed: ") + e.what());
        }
        if (s_.learning_policy.kind == LearningPolicyKind::fresh_window) {
            data_.samples.clear();
        }
    }

    ExpectedTau expected_for(const ContinuousModel& model, std::size_t learn_index) {
        McConfig mc = s_.mc;
        mc.tau_max = s_.learn_trigger.tau_max;
        mc.sigma0 = restart_variance(model, s_.state_trigger.delta, s_.actuator, mc.tau_max);
        mc.seed = derive_seed(s_.seed, learn_index + 1);
        last_sigma0_ = mc.sigma0;
        return estimate_expected_tau(model, s_.state_trigger.delta, mc);
    }

    bool keep_all_data() const { return s_.learning_policy.kind == LearningPolicyKind::all_data; }

    void record_error(std::string text) {
        ++log_.error_count;
        if (log_.errors.size() < max_logged_errors) {
            log_.errors.push_back(LogMessage{events_, t_, std::move(text)});
        }
    }

    const Scenario& s_;
    NoiseStream noise_;
    StoppingTimeWindow window_;
    Dataset data_;
    EventLog log_;

    ContinuousModel truth_;
    DiscreteModel truth_disc_;
    std::size_t next_truth_ = 1;
    ContinuousModel controller_;
    ExpectedTau expected_;
    double last_sigma0_ = 0.0;

    double x_ = 0.0;
    std::uint64_t steps_ = 0;
    double t_ = 0.0;
    double t_reset_ = 0.0;
    std::size_t events_ = 0;

    bool pulse_active_ = false;
    double pulse_end_ = 0.0;
    double amplitude_ = 0.0;

    bool collecting_ = false;
    double collect_until_ = 0.0;
    std::size_t pending_trigger_event_ = 0;
    double pending_trigger_t_ = 0.0;
};

void write_number(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out << buf;
}

} // namespace

EventLog run_scenario(const Scenario& scenario) {
    scenario.validate();
    return ClosedLoop(scenario).run();
}

std::vector<double> moving_average(std::span<const double> taus, std::size_t window,
                                   std::span<const std::size_t> resets) {
    if (window == 0) {
        throw std::invalid_argument("moving_average: window must be >= 1");
    }
    std::vector<std::size_t> sorted_resets(resets.begin(), resets.end());
    std::sort(sorted_resets.begin(), sorted_resets.end());
    std::vector<double> out;
    out.reserve(taus.size());
    std::size_t run_start = 0;
    auto next_reset = sorted_resets.begin();
    for (std::size_t i = 0; i < taus.size(); ++i) {
        while (next_reset != sorted_resets.end() && *next_reset <= i) {
            run_start = *next_reset;
            ++next_reset;
        }
        const std::size_t first = std::max(run_start, i + 1 >= window ? i + 1 - window : std::size_t{0});
        double sum = 0.0;
        for (std::size_t j = first; j <= i; ++j) {
            sum += taus[j];
        }
        out.push_back(sum / static_cast<double>(i + 1 - first));
    }
    return out;
}

void write_csv(const EventLog& log, std::ostream& out) {
    out << csv_header << '\n';
    for (const EventRow& r : log.rows) {
        out << r.event_index;
        for (const double v : {r.t_s, r.x_trigger, r.pulse_amp, r.pulse_dur_s, r.tau_s, r.window_mean_s,
                               r.expected_tau_s, r.kappa_s}) {
            out << ',';
            write_number(out, v);
        }
        out << ',' << (r.gamma_learn ? 1 : 0);
        for (const double v : {r.model.a, r.model.b, r.model.eps_eff, r.model.q}) {
            out << ',';
            write_number(out, v);
        }
        out << '\n';
    }
}

void export_csv(const EventLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_csv(log, out);
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

} // namespace pulse_etl
