// pulse-etl: command-line front end for the event-triggered pulse control
// simulator.
//
//   pulse-etl run --scenario FILE [--seed N] --out DIR
//   pulse-etl mc --a A --b B --eps E --q Q [--entry-mode input_side] ...
//   pulse-etl replicate --example {1,2,3} [--seed N] [--out DIR]
//   pulse-etl kappa --eta 0.05 --N 2000 --tau-max 1

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "pulse_etl/errors.hpp"
#include "pulse_etl/examples.hpp"
#include "pulse_etl/harness.hpp"
#include "pulse_etl/scenario.hpp"
#include "pulse_etl/stopping_time.hpp"
#include "pulse_etl/triggers.hpp"

namespace fs = std::filesystem;
using namespace pulse_etl;

namespace {

constexpr int exit_config = 1;
constexpr int exit_io = 2;

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
}

void write_errors(const EventLog& log, const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << "event_index,t_s,message\n";
    for (const LogMessage& m : log.errors) {
        out << m.event_index << ',' << m.t_s << ",\"" << m.text << "\"\n";
    }
}

void print_run_summary(const Scenario& s, const EventLog& log) {
    std::printf("%s: %zu events over %.3f s, initial E[tau] = %.4f s, kappa = %.4f s\n", s.name.c_str(),
                log.rows.size(), log.end_t_s, log.initial_expected.mean, s.learn_trigger.kappa);
    for (const LearningSummary& l : summarize_learning(log)) {
        const LearningRecord& rec = log.learnings[l.learning_index];
        std::printf("  learning %zu at event %zu (installed after event %zu, %zu samples): "
                    "a=%.5g b=%.5g eps_eff=%.5g q=%.3g, E[tau] %.4f -> %.4f s, mean tau %.4f -> %.4f s\n",
                    l.learning_index + 1, rec.trigger_event, rec.installed_after_event, rec.n_samples, rec.model.a,
                    rec.model.b, rec.model.eps_eff, rec.model.q, l.expected_before_s, l.expected_after_s,
                    l.mean_before_s, l.mean_after_s);
    }
    if (log.clipped_pulses > 0) {
        std::fprintf(stderr, "warning: %zu pulse(s) clipped to tau_max\n", log.clipped_pulses);
    }
    if (log.error_count > 0) {
        std::fprintf(stderr, "warning: %zu run-time error(s); first: %s\n", log.error_count,
                     log.errors.front().text.c_str());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-triggered pulse control with event-triggered model learning"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run a scenario file and write events.csv");
    std::string scenario_path;
    std::optional<std::uint64_t> run_seed;
    std::string run_out;
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    run->add_option("--seed", run_seed, "Override the scenario seed");
    run->add_option("--out", run_out, "Output directory")->required();

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the expected stopping time");
    double a = 0.0, b = 0.0, eps = 0.0, q = 0.0, delta = 0.02, u_max = 1.0, tau_max = 1.0, dt = 1e-3;
    std::size_t m_runs = 10000;
    std::uint64_t mc_seed = 0;
    std::string entry_mode = "additive";
    std::optional<double> sigma0;
    mc->add_option("--a", a, "Drift coefficient")->required();
    mc->add_option("--b", b, "Input gain")->required();
    mc->add_option("--eps", eps, "Load disturbance");
    mc->add_option("--q", q, "Diffusion coefficient");
    mc->add_option("--entry-mode", entry_mode, "additive | input_side")
        ->check(CLI::IsMember({"additive", "input_side"}));
    mc->add_option("--delta", delta, "State trigger threshold");
    mc->add_option("--u-max", u_max, "Actuator limit (used for the restart variance)");
    mc->add_option("--tau-max", tau_max, "Stopping-time cap [s]");
    mc->add_option("--dt", dt, "Simulation step [s]");
    mc->add_option("--M", m_runs, "Number of Monte Carlo runs");
    mc->add_option("--seed", mc_seed, "Seed");
    mc->add_option("--sigma0", sigma0, "Restart variance (default: derived from a threshold-sized pulse)");

    // replicate
    auto* rep = app.add_subcommand("replicate", "Run one of the numerical-study examples");
    int example_id = 1;
    std::uint64_t rep_seed = 1;
    std::string rep_out;
    rep->add_option("--example", example_id, "Example id")->required()->check(CLI::IsMember({1, 2, 3}));
    rep->add_option("--seed", rep_seed, "Seed for parameter draws and noise");
    rep->add_option("--out", rep_out, "Write one CSV per system into this directory");

    // kappa
    auto* kap = app.add_subcommand("kappa", "Learning-trigger threshold");
    double eta = 0.05, k_tau_max = 1.0;
    std::size_t n_window = 2000;
    kap->add_option("--eta", eta, "Confidence level")->required();
    kap->add_option("--N", n_window, "Window length")->required();
    kap->add_option("--tau-max", k_tau_max, "Stopping-time bound [s]");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            Scenario s = load_scenario(scenario_path);
            if (run_seed) {
                s.seed = *run_seed;
            }
            const EventLog log = run_scenario(s);
            ensure_dir(run_out);
            export_csv(log, fs::path(run_out) / "events.csv");
            if (!log.errors.empty()) {
                write_errors(log, fs::path(run_out) / "errors.csv");
            }
            print_run_summary(s, log);
        } else if (*mc) {
            const auto entry = entry_mode == "input_side" ? DisturbanceEntry::input_side : DisturbanceEntry::additive;
            const ContinuousModel model{a, b, make_effective_disturbance(eps, entry, b), q};
            model.validate();
            McConfig cfg;
            cfg.m_sim = m_runs;
            cfg.dt = dt;
            cfg.tau_max = tau_max;
            cfg.seed = mc_seed;
            cfg.sigma0 = sigma0 ? *sigma0 : restart_variance(model, delta, ActuatorLimits{u_max}, tau_max);
            const ExpectedTau e = estimate_expected_tau(model, delta, cfg);
            std::printf("mean_tau_s=%.9g\nstd_error_s=%.9g\nruns=%zu\nsigma0=%.9g\n", e.mean, e.std_error, e.m_used,
                        cfg.sigma0);
        } else if (*rep) {
            const ExampleReport report = replicate_example(example_id, rep_seed);
            print_report(report, std::cout);
            if (!rep_out.empty()) {
                ensure_dir(rep_out);
                for (const SystemReport& sys : report.systems) {
                    export_csv(sys.log, fs::path(rep_out) / (sys.scenario.name + ".csv"));
                }
            }
        } else if (*kap) {
            std::printf("%.9g\n", kappa(eta, n_window, k_tau_max));
        }
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_io;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config;
    }
    return 0;
}
