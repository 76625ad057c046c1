#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

#include "pulse_etl/pulse.hpp"
#include "pulse_etl/sde.hpp"

namespace pulse_etl {

struct McConfig {
    std::size_t m_sim = 10000;
    double dt = 1e-3;
    double tau_max = 1.0;
    double sigma0 = 0.0; // variance of the post-pulse restart state
    std::uint64_t seed = 0;

    void validate() const;
};

struct ExpectedTau {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t m_used = 0;
};

/// Variance q^2 (e^{2 a t} - 1)/(2a) accumulated while a threshold-sized
/// pulse (x0 = delta) is applied. Propagates InsufficientAuthority.
[[nodiscard]] double restart_variance(const ContinuousModel& model, double delta, const ActuatorLimits& limits,
                                      double duration_cap = std::numeric_limits<double>::infinity());

/// Monte Carlo mean of the first time |x| >= delta for the unforced plant
/// started at x(0) ~ N(0, sigma0). Runs are capped at tau_max and each run
/// draws from its own NoiseStream(seed, run index).
[[nodiscard]] ExpectedTau estimate_expected_tau(const ContinuousModel& model, double delta, const McConfig& cfg);

/// A single simulated stopping time; exposed for tests.
[[nodiscard]] double simulate_stopping_time(const DiscreteModel& disc, double delta, double tau_max, double sigma0,
                                            std::uint64_t seed, std::uint64_t run_index);

} // namespace pulse_etl
