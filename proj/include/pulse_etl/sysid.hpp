#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pulse_etl/sde.hpp"

namespace pulse_etl {

/// Which constant offset the third regressor coefficient represents. The two
/// cannot be told apart from output data, so a fit picks exactly one.
enum class DisturbanceMode { load_disturbance, sensor_bias };

struct Sample {
    double x = 0.0;      // state (or biased measurement) at k
    double u = 0.0;      // mean input over [k, k+1)
    double x_next = 0.0; // state at k+1
};

struct Dataset {
    std::vector<Sample> samples;
    double dt = 1e-3;
};

struct LsEstimate {
    double a_d = 1.0;
    double a_d_minus_1 = 0.0; // carried separately to keep precision near a_d = 1
    double b_d = 0.0;
    double dist_term = 0.0;   // eps_d (load) or xi (sensor bias)
    double resid_var = 0.0;
    DisturbanceMode mode = DisturbanceMode::load_disturbance;
    /// Standard errors of (a_d, b_d, third regressor coefficient).
    std::array<double, 3> std_errors{};
    std::size_t n_samples = 0;
};

/// Ordinary least squares of x_{k+1} on (x_k, u_k, 1).
/// Throws RankDeficient for collinear regressors or fewer than 3 samples,
/// BiasUnidentifiable in sensor-bias mode when |1 - a_d| < 1e-9.
[[nodiscard]] LsEstimate least_squares_fit(const Dataset& data, DisturbanceMode mode);

/// Continuous diffusion coefficient consistent with the residual variance.
/// Throws NonInvertibleDiscretization when a_d <= 0.
[[nodiscard]] double estimate_noise(const LsEstimate& estimate, double dt);

/// Inverts the zero-order-hold discretization. In sensor-bias mode eps_eff is 0.
/// Throws NonInvertibleDiscretization when a_d <= 0.
[[nodiscard]] ContinuousModel to_continuous(const LsEstimate& estimate, double dt);

} // namespace pulse_etl
