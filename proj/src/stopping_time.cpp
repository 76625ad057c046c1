#include "pulse_etl/stopping_time.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pulse_etl/errors.hpp"
#include "pulse_etl/noise.hpp"

namespace pulse_etl {

void McConfig::validate() const {
    if (m_sim < 1) {
        throw ConfigError("Monte Carlo run count must be >= 1");
    }
    if (!(dt > 0.0)) {
        throw ConfigError("Monte Carlo dt must be positive");
    }
    if (!(tau_max > 0.0)) {
        throw ConfigError("Monte Carlo tau_max must be positive");
    }
    if (!(sigma0 >= 0.0)) {
        throw ConfigError("restart variance sigma0 must be >= 0");
    }
}

double restart_variance(const ContinuousModel& model, double delta, const ActuatorLimits& limits,
                        double duration_cap) {
    const PulseCommand nominal = plan_pulse(model, delta, limits, duration_cap);
    return model.q * model.q * expm1_over(2.0 * model.a, nominal.duration);
}

double simulate_stopping_time(const DiscreteModel& disc, double delta, double tau_max, double sigma0,
                              std::uint64_t seed, std::uint64_t run_index) {
    NoiseStream noise(seed, run_index);
    double x = std::sqrt(sigma0) * noise.next();
    const double sd = std::sqrt(disc.noise_var);
    // Step count at which the run is capped; the tolerance absorbs
    // tau_max / dt landing a hair above an integer.
    const auto cap_steps = static_cast<std::uint64_t>(std::ceil(tau_max / disc.dt - 1e-9));
    for (std::uint64_t k = 1; k <= cap_steps; ++k) {
        x = disc.a_d * x + disc.eps_d + sd * noise.next();
        if (std::abs(x) >= delta) {
            return std::min(static_cast<double>(k) * disc.dt, tau_max);
        }
    }
    return tau_max;
}

ExpectedTau estimate_expected_tau(const ContinuousModel& model, double delta, const McConfig& cfg) {
    cfg.validate();
    const DiscreteModel disc = discretize(model, cfg.dt);
    std::vector<double> taus(cfg.m_sim);
    for (std::size_t i = 0; i < cfg.m_sim; ++i) {
        taus[i] = simulate_stopping_time(disc, delta, cfg.tau_max, cfg.sigma0, cfg.seed, i);
    }
    double sum = 0.0;
    for (double t : taus) {
        sum += t;
    }
    const double m = static_cast<double>(cfg.m_sim);
    ExpectedTau out;
    out.mean = sum / m;
    out.m_used = cfg.m_sim;
    if (cfg.m_sim > 1) {
        double ss = 0.0;
        for (double t : taus) {
            ss += (t - out.mean) * (t - out.mean);
        }
        out.std_error = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
    }
    return out;
}

} // namespace pulse_etl
