#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "pulse_etl/errors.hpp"
#include "pulse_etl/examples.hpp"
#include "pulse_etl/harness.hpp"
#include "pulse_etl/pulse.hpp"
#include "pulse_etl/scenario.hpp"
#include "pulse_etl/sde.hpp"
#include "pulse_etl/stopping_time.hpp"
#include "pulse_etl/sysid.hpp"
#include "pulse_etl/triggers.hpp"

namespace py = pybind11;
using namespace pulse_etl;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Event-triggered pulse control with event-triggered model learning";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<InsufficientAuthority>(m, "InsufficientAuthority", base.ptr());
    py::register_exception<RankDeficient>(m, "RankDeficient", base.ptr());
    py::register_exception<BiasUnidentifiable>(m, "BiasUnidentifiable", base.ptr());
    py::register_exception<NonInvertibleDiscretization>(m, "NonInvertibleDiscretization", base.ptr());
    py::register_exception<WindowNotFull>(m, "WindowNotFull", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::enum_<DisturbanceEntry>(m, "DisturbanceEntry")
        .value("additive", DisturbanceEntry::additive)
        .value("input_side", DisturbanceEntry::input_side);
    py::enum_<DisturbanceMode>(m, "DisturbanceMode")
        .value("load_disturbance", DisturbanceMode::load_disturbance)
        .value("sensor_bias", DisturbanceMode::sensor_bias);

    py::class_<ContinuousModel>(m, "ContinuousModel")
        .def(py::init([](double a, double b, double eps_eff, double q) { return ContinuousModel{a, b, eps_eff, q}; }),
             py::arg("a"), py::arg("b"), py::arg("eps_eff") = 0.0, py::arg("q") = 0.0)
        .def_readwrite("a", &ContinuousModel::a)
        .def_readwrite("b", &ContinuousModel::b)
        .def_readwrite("eps_eff", &ContinuousModel::eps_eff)
        .def_readwrite("q", &ContinuousModel::q)
        .def("__repr__", [](const ContinuousModel& c) {
            std::ostringstream os;
            os << "ContinuousModel(a=" << c.a << ", b=" << c.b << ", eps_eff=" << c.eps_eff << ", q=" << c.q << ")";
            return os.str();
        });

    py::class_<DiscreteModel>(m, "DiscreteModel")
        .def_readonly("a_d", &DiscreteModel::a_d)
        .def_readonly("b_d", &DiscreteModel::b_d)
        .def_readonly("eps_d", &DiscreteModel::eps_d)
        .def_readonly("noise_var", &DiscreteModel::noise_var)
        .def_readonly("dt", &DiscreteModel::dt);

    m.def("make_effective_disturbance", &make_effective_disturbance, py::arg("load"), py::arg("entry"), py::arg("b"));
    m.def("discretize", &discretize, py::arg("model"), py::arg("dt"));
    m.def("step", &step, py::arg("disc"), py::arg("x"), py::arg("u"), py::arg("z"));
    m.def("propagate_noiseless", &propagate_noiseless, py::arg("model"), py::arg("x0"), py::arg("u"), py::arg("t"));

    py::class_<ActuatorLimits>(m, "ActuatorLimits")
        .def(py::init([](double u_max) { return ActuatorLimits{u_max}; }), py::arg("u_max"))
        .def_readwrite("u_max", &ActuatorLimits::u_max);
    py::class_<PulseCommand>(m, "PulseCommand")
        .def_readonly("amplitude", &PulseCommand::amplitude)
        .def_readonly("duration", &PulseCommand::duration)
        .def_readonly("clipped", &PulseCommand::clipped);
    m.def("pulse_length", &pulse_length, py::arg("model"), py::arg("x0"), py::arg("u_signed"));
    m.def("plan_pulse", &plan_pulse, py::arg("model"), py::arg("x0"), py::arg("limits"),
          py::arg("duration_cap") = std::numeric_limits<double>::infinity());
    m.def("dirac_reset", &dirac_reset, py::arg("x"));

    m.def("state_trigger", [](double x, double delta) { return state_trigger(x, StateTriggerConfig{delta}); },
          py::arg("x"), py::arg("delta"));
    m.def("kappa", &kappa, py::arg("eta"), py::arg("n_window"), py::arg("tau_max"));

    py::class_<ExpectedTau>(m, "ExpectedTau")
        .def_readonly("mean", &ExpectedTau::mean)
        .def_readonly("std_error", &ExpectedTau::std_error)
        .def_readonly("m_used", &ExpectedTau::m_used);
    m.def("restart_variance", &restart_variance, py::arg("model"), py::arg("delta"), py::arg("limits"),
          py::arg("duration_cap") = std::numeric_limits<double>::infinity());
    m.def(
        "estimate_expected_tau",
        [](const ContinuousModel& model, double delta, std::size_t m_sim, double dt, double tau_max, double sigma0,
           std::uint64_t seed) {
            return estimate_expected_tau(model, delta, McConfig{m_sim, dt, tau_max, sigma0, seed});
        },
        py::arg("model"), py::arg("delta"), py::arg("m_sim") = 10000, py::arg("dt") = 1e-3, py::arg("tau_max") = 1.0,
        py::arg("sigma0") = 0.0, py::arg("seed") = 0);

    py::class_<LsEstimate>(m, "LsEstimate")
        .def_readonly("a_d", &LsEstimate::a_d)
        .def_readonly("b_d", &LsEstimate::b_d)
        .def_readonly("dist_term", &LsEstimate::dist_term)
        .def_readonly("resid_var", &LsEstimate::resid_var)
        .def_readonly("std_errors", &LsEstimate::std_errors)
        .def_readonly("n_samples", &LsEstimate::n_samples)
        .def_readonly("mode", &LsEstimate::mode);
    m.def(
        "least_squares_fit",
        [](const std::vector<double>& x, const std::vector<double>& u, const std::vector<double>& x_next, double dt,
           DisturbanceMode mode) {
            if (x.size() != u.size() || x.size() != x_next.size()) {
                throw py::value_error("x, u and x_next must have equal length");
            }
            Dataset data;
            data.dt = dt;
            for (std::size_t i = 0; i < x.size(); ++i) {
                data.samples.push_back(Sample{x[i], u[i], x_next[i]});
            }
            return least_squares_fit(data, mode);
        },
        py::arg("x"), py::arg("u"), py::arg("x_next"), py::arg("dt"),
        py::arg("mode") = DisturbanceMode::load_disturbance);
    m.def("estimate_noise", &estimate_noise, py::arg("estimate"), py::arg("dt"));
    m.def("to_continuous", &to_continuous, py::arg("estimate"), py::arg("dt"));

    py::class_<Scenario>(m, "Scenario")
        .def_readwrite("name", &Scenario::name)
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("horizon_events", &Scenario::horizon_events)
        .def_readwrite("horizon_s", &Scenario::horizon_s)
        .def_readonly("nominal_model", &Scenario::nominal_model);
    m.def("parse_scenario", &parse_scenario_text, py::arg("text"));
    m.def("load_scenario", &load_scenario, py::arg("path"));

    py::class_<EventRow>(m, "EventRow")
        .def_readonly("event_index", &EventRow::event_index)
        .def_readonly("t_s", &EventRow::t_s)
        .def_readonly("x_trigger", &EventRow::x_trigger)
        .def_readonly("pulse_amp", &EventRow::pulse_amp)
        .def_readonly("pulse_dur_s", &EventRow::pulse_dur_s)
        .def_readonly("tau_s", &EventRow::tau_s)
        .def_readonly("window_mean_s", &EventRow::window_mean_s)
        .def_readonly("expected_tau_s", &EventRow::expected_tau_s)
        .def_readonly("kappa_s", &EventRow::kappa_s)
        .def_readonly("gamma_learn", &EventRow::gamma_learn)
        .def_readonly("model", &EventRow::model);
    py::class_<LearningRecord>(m, "LearningRecord")
        .def_readonly("trigger_event", &LearningRecord::trigger_event)
        .def_readonly("installed_after_event", &LearningRecord::installed_after_event)
        .def_readonly("model", &LearningRecord::model)
        .def_readonly("expected", &LearningRecord::expected);
    py::class_<EventLog>(m, "EventLog")
        .def_readonly("rows", &EventLog::rows)
        .def_readonly("learnings", &EventLog::learnings)
        .def_readonly("error_count", &EventLog::error_count)
        .def_readonly("initial_expected", &EventLog::initial_expected)
        .def("to_csv", [](const EventLog& log) {
            std::ostringstream os;
            write_csv(log, os);
            return os.str();
        });
    m.def("run_scenario", &run_scenario, py::arg("scenario"), py::call_guard<py::gil_scoped_release>());
    m.def("export_csv", &export_csv, py::arg("log"), py::arg("path"));
    m.def(
        "moving_average",
        [](const std::vector<double>& taus, std::size_t window, const std::vector<std::size_t>& resets) {
            return moving_average(taus, window, resets);
        },
        py::arg("taus"), py::arg("window"), py::arg("resets") = std::vector<std::size_t>{});

    py::class_<LearningSummary>(m, "LearningSummary")
        .def_readonly("mean_before_s", &LearningSummary::mean_before_s)
        .def_readonly("mean_after_s", &LearningSummary::mean_after_s)
        .def_readonly("expected_before_s", &LearningSummary::expected_before_s)
        .def_readonly("expected_after_s", &LearningSummary::expected_after_s);
    m.def("summarize_learning", &summarize_learning, py::arg("log"));
    m.def(
        "replicate_example",
        [](int example, std::uint64_t seed) {
            const ExampleReport report = replicate_example(example, seed);
            std::ostringstream os;
            print_report(report, os);
            return os.str();
        },
        py::arg("example"), py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>(),
        "Runs an example and returns the printed before/after report.");
}
