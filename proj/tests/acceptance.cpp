// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: acceptance [--known-failure ID]... [pulse-etl binary] [scenario for the determinism check] [scratch dir]
// A known failure still prints FAIL but does not affect the exit code; if it
// starts passing the exit code is nonzero so the list gets cleaned up.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pulse_etl/errors.hpp"
#include "pulse_etl/examples.hpp"
#include "pulse_etl/harness.hpp"
#include "pulse_etl/noise.hpp"
#include "pulse_etl/pulse.hpp"
#include "pulse_etl/sde.hpp"
#include "pulse_etl/stopping_time.hpp"
#include "pulse_etl/sysid.hpp"
#include "pulse_etl/triggers.hpp"

using namespace pulse_etl;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ContinuousModel example1_model(double load) {
    return ContinuousModel{-0.01, -0.01, make_effective_disturbance(load, DisturbanceEntry::input_side, -0.01), 1e-4};
}

Outcome kappa_value() {
    const double k = kappa(0.05, 2000, 1.0);
    return {std::abs(k - 0.06619) <= 1e-4, fmt("kappa(0.05, 2000, 1) = %.8f", k)};
}

Outcome expected_tau_example1() {
    const ContinuousModel m = example1_model(5.0);
    const ActuatorLimits lim{100.0};
    McConfig cfg;
    cfg.m_sim = 10000;
    cfg.dt = 1e-3;
    cfg.tau_max = 1.0;
    cfg.sigma0 = restart_variance(m, 0.02, lim, 1.0);
    cfg.seed = 1;
    const ExpectedTau e = estimate_expected_tau(m, 0.02, cfg);
    return {std::abs(e.mean - 0.402) <= 0.010, fmt("E[tau] = %.5f s (se %.2e, M=%zu)", e.mean, e.std_error, e.m_used)};
}

Outcome fig2_narrative() {
    const Scenario s = example_scenarios(1, 1).front();
    const EventLog log = run_scenario(s);
    const std::size_t n = s.learn_trigger.n_window;
    const double k = s.learn_trigger.kappa;

    bool first_ok = log.rows.size() >= 2000;
    for (std::size_t i = 0; first_ok && i < 2000; ++i) {
        const EventRow& r = log.rows[i];
        if (r.gamma_learn) {
            first_ok = false;
        }
        if (i + 1 >= n && std::abs(r.window_mean_s - r.expected_tau_s) >= k) {
            first_ok = false;
        }
    }

    const LearningRecord* learn = nullptr;
    for (const LearningRecord& rec : log.learnings) {
        if (rec.trigger_event > 2000 && rec.trigger_event <= 7000) {
            learn = &rec;
            break;
        }
    }
    bool fired_ok = false;
    double mean_at_trigger = NAN;
    if (learn != nullptr) {
        const EventRow& r = log.rows[learn->trigger_event - 1];
        mean_at_trigger = r.window_mean_s;
        fired_ok = r.gamma_learn && r.window_mean_s <= r.expected_tau_s - k;
    }

    bool return_ok = false;
    double e_new = NAN;
    double mean_after = NAN;
    if (learn != nullptr) {
        e_new = learn->expected.mean;
        const std::size_t idx = learn->installed_after_event + n; // first full window after install
        if (idx <= log.rows.size() && idx <= 7000) {
            mean_after = log.rows[idx - 1].window_mean_s;
            return_ok = std::abs(mean_after - e_new) < k && std::abs(e_new - 0.202) <= 0.010;
        }
    }

    return {first_ok && fired_ok && return_ok,
            fmt("(i) %s; (ii) %s, window mean %.4f s; (iii) %s, new E %.4f s, window mean %.4f s", first_ok ? "ok" : "no",
                fired_ok ? "ok" : "no", mean_at_trigger, return_ok ? "ok" : "no", e_new, mean_after)};
}

Outcome ordinal_claim() {
    std::size_t ok = 0;
    std::size_t total = 0;
    std::string failures;
    for (const int example : {2, 3}) {
        const ExampleReport rep = replicate_example(example, 1);
        for (const SystemReport& sys : rep.systems) {
            ++total;
            bool pass = !sys.learning.empty();
            for (const LearningSummary& l : sys.learning) {
                pass = pass && l.events_after > 0 && l.mean_after_s > l.mean_before_s;
            }
            if (pass) {
                ++ok;
            } else {
                failures += " " + sys.scenario.name;
                if (sys.learning.empty()) {
                    failures += "(no learning)";
                } else {
                    failures += fmt("(%.1f->%.1f ms)", 1e3 * sys.learning.front().mean_before_s,
                                    1e3 * sys.learning.front().mean_after_s);
                }
            }
        }
    }
    return {ok == total, fmt("%zu/%zu systems increase after learning", ok, total) +
                             (failures.empty() ? std::string() : ";" + failures)};
}

Outcome pulse_exactness() {
    std::mt19937_64 rng(derive_seed(5, 0));
    std::uniform_real_distribution<double> a_dist(-10.0, 10.0);
    std::uniform_real_distribution<double> mag(0.2, 5.0);
    std::uniform_real_distribution<double> eps_dist(-0.5, 0.5);
    std::uniform_real_distribution<double> x_dist(0.02, 0.5);
    std::bernoulli_distribution sign;
    const double delta = 0.02;

    std::size_t checked = 0;
    double worst = 0.0;
    while (checked < 1000) {
        const ContinuousModel m{a_dist(rng), (sign(rng) ? 1 : -1) * mag(rng), eps_dist(rng), 0.0};
        const double x0 = (sign(rng) ? 1 : -1) * x_dist(rng);
        const ActuatorLimits lim{mag(rng)};
        PulseCommand cmd;
        try {
            cmd = plan_pulse(m, x0, lim);
        } catch (const InsufficientAuthority&) {
            continue;
        }
        ++checked;
        const double end = propagate_noiseless(m, x0, cmd.amplitude, cmd.duration);
        worst = std::max(worst, std::abs(end) / (1e-9 * std::max(std::abs(x0), delta)));
    }
    const PulseCommand ex1 = plan_pulse(example1_model(5.0), delta, ActuatorLimits{100.0});
    const bool pass = worst <= 1.0 && std::abs(ex1.duration - 0.01905) <= 1e-5;
    return {pass, fmt("worst residual %.3g of tolerance over %zu pairs; Example-1 pulse %.6f s", worst, checked,
                      ex1.duration)};
}

Dataset simulate(const ContinuousModel& m, double dt, std::size_t n, std::uint64_t seed) {
    const DiscreteModel d = discretize(m, dt);
    NoiseStream noise(seed, 0);
    std::mt19937_64 rng(derive_seed(seed, 99));
    std::uniform_int_distribution<int> level(-1, 1);
    Dataset data;
    data.dt = dt;
    double x = 0.0;
    double u = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k % 50 == 0) {
            u = level(rng);
        }
        // keep the state bounded for unstable draws
        const double u_applied = std::abs(x) > 1.0 ? -std::copysign(1.0, x * m.b) * 5.0 : u;
        const double next = step(d, x, u_applied, noise.next());
        data.samples.push_back(Sample{x, u_applied, next});
        x = next;
    }
    return data;
}

Outcome identification() {
    std::mt19937_64 rng(derive_seed(6, 0));
    std::uniform_real_distribution<double> a_dist(0.1, 5.0);
    std::uniform_real_distribution<double> b_dist(0.5, 3.0);
    std::uniform_real_distribution<double> eps_dist(0.05, 1.0);
    std::bernoulli_distribution sign;
    const double dt = 1e-3;

    double worst_rel = 0.0;
    for (int i = 0; i < 100; ++i) {
        const ContinuousModel m{(sign(rng) ? 1 : -1) * a_dist(rng), (sign(rng) ? 1 : -1) * b_dist(rng),
                                (sign(rng) ? 1 : -1) * eps_dist(rng), 0.0};
        const Dataset data = simulate(m, dt, 2000, 100 + i);
        const ContinuousModel est = to_continuous(least_squares_fit(data, DisturbanceMode::load_disturbance), dt);
        worst_rel = std::max({worst_rel, std::abs(est.a - m.a) / std::abs(m.a), std::abs(est.b - m.b) / std::abs(m.b),
                              std::abs(est.eps_eff - m.eps_eff) / std::abs(m.eps_eff)});
    }

    double worst_z = 0.0;
    const std::vector<ContinuousModel> noisy{
        {-0.5, 1.0, 0.2, 0.01}, {2.0, -1.5, 0.05, 0.005}, {-0.01, -0.01, -0.05, 1e-4}};
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        const ContinuousModel& m = noisy[i];
        const DiscreteModel d = discretize(m, dt);
        const LsEstimate e =
            least_squares_fit(simulate(m, dt, 100000, 500 + i), DisturbanceMode::load_disturbance);
        const double truth[3] = {d.a_d - 1.0, d.b_d, d.eps_d};
        const double got[3] = {e.a_d_minus_1, e.b_d, e.dist_term};
        for (int j = 0; j < 3; ++j) {
            worst_z = std::max(worst_z, std::abs(got[j] - truth[j]) / e.std_errors[j]);
        }
    }
    return {worst_rel <= 1e-8 && worst_z <= 3.0,
            fmt("noiseless worst relative error %.3g (100 models); noisy worst |z| %.2f", worst_rel, worst_z)};
}

Outcome false_trigger_rate() {
    Scenario s = example_scenarios(1, 2).front();
    s.truth_schedule.resize(1);
    s.learn_trigger = LearnTriggerConfig::make(0.05, 200, 10000, 1.0);
    s.horizon_events = 100 * 200;
    const EventLog log = run_scenario(s);
    if (log.rows.size() < 20000) {
        return {false, "run ended early"};
    }
    const double e = log.initial_expected.mean;
    std::size_t fired = 0;
    std::size_t gamma_rows = 0;
    for (std::size_t w = 0; w < 100; ++w) {
        double sum = 0.0;
        for (std::size_t i = 0; i < 200; ++i) {
            sum += log.rows[w * 200 + i].tau_s;
        }
        if (std::abs(sum / 200.0 - e) >= s.learn_trigger.kappa) {
            ++fired;
        }
    }
    for (const EventRow& r : log.rows) {
        gamma_rows += r.gamma_learn ? 1 : 0;
    }
    return {fired <= 5 && gamma_rows <= 5,
            fmt("%zu/100 disjoint windows exceed kappa=%.4f; closed loop fired %zu times", fired,
                s.learn_trigger.kappa, gamma_rows)};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const std::string& cli, const std::string& scenario, const std::filesystem::path& scratch) {
    if (cli.empty()) {
        const Scenario s = example_scenarios(1, 3).front();
        std::ostringstream a, b;
        Scenario shorter = s;
        shorter.horizon_events = 3000;
        write_csv(run_scenario(shorter), a);
        write_csv(run_scenario(shorter), b);
        return {a.str() == b.str(), "in-process comparison (no CLI given)"};
    }
    std::filesystem::remove_all(scratch);
    std::filesystem::create_directories(scratch);
    std::string sizes;
    std::vector<std::string> outputs;
    for (const char* run : {"a", "b"}) {
        const auto dir = scratch / run;
        const std::string cmd = "\"" + cli + "\" run --scenario \"" + scenario + "\" --seed 5 --out \"" +
                                dir.string() + "\" > \"" + (scratch / (std::string(run) + ".log")).string() + "\"";
        if (std::system(cmd.c_str()) != 0) {
            return {false, "CLI failed: " + cmd};
        }
        outputs.push_back(slurp(dir / "events.csv"));
    }
    const bool pass = !outputs[0].empty() && outputs[0] == outputs[1];
    return {pass, fmt("two runs, %zu bytes each, %s", outputs[0].size(), pass ? "identical" : "differ")};
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> known_failures;
    std::vector<std::string> positional;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--known-failure" && i + 1 < argc) {
            known_failures.emplace_back(argv[++i]);
        } else {
            positional.push_back(arg);
        }
    }
    const std::string cli = positional.size() > 0 ? positional[0] : "";
    const std::string scenario = positional.size() > 1 ? positional[1] : "";
    const std::filesystem::path scratch = positional.size() > 2
                                              ? std::filesystem::path(positional[2])
                                              : std::filesystem::temp_directory_path() / "pulse_etl_acceptance";

    struct Criterion {
        std::string id;
        std::string name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {"kappa", "kappa formula", kappa_value},
        {"expected_tau", "expected stopping time, Example 1", expected_tau_example1},
        {"narrative", "Example 1 learning narrative", fig2_narrative},
        {"ordinal", "Examples 2-3 ordinal improvement", ordinal_claim},
        {"pulse", "pulse exactness", pulse_exactness},
        {"sysid", "identification round trip", identification},
        {"false_trigger", "false-trigger rate", false_trigger_rate},
        {"determinism", "determinism", [&] { return determinism(cli, scenario, scratch); }},
    };

    int failed = 0;
    int unexpected = 0;
    for (const Criterion& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const bool known = std::find(known_failures.begin(), known_failures.end(), c.id) != known_failures.end();
        std::printf("%s  [%s] %s: %s%s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.name.c_str(), o.detail.c_str(),
                    known ? (o.pass ? " (listed as known failure, now passing)" : " (known failure)") : "");
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
        unexpected += o.pass == known ? 1 : 0;
    }
    std::printf("%d of %zu criteria failed, %d unexpected result(s)\n", failed, criteria.size(), unexpected);
    return unexpected == 0 ? 0 : 1;
}
