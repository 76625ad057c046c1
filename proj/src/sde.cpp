#include "pulse_etl/sde.hpp"

#include <cmath>
#include <string>

#include "pulse_etl/errors.hpp"

namespace pulse_etl {

void ContinuousModel::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(eps_eff) || !std::isfinite(q)) {
        throw ConfigError("model parameters must be finite");
    }
    if (q < 0.0) {
        throw ConfigError("diffusion coefficient q must be >= 0, got " + std::to_string(q));
    }
}

double expm1_over(double a, double t) noexcept {
    const double at = a * t;
    if (std::abs(at) < series_threshold) {
        return t * (1.0 + at / 2.0 + at * at / 6.0);
    }
    return std::expm1(at) / a;
}

double make_effective_disturbance(double load, DisturbanceEntry entry, double b) noexcept {
    return entry == DisturbanceEntry::input_side ? b * load : load;
}

DiscreteModel discretize(const ContinuousModel& model, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("discretization step must be positive and finite");
    }
    const double phi = expm1_over(model.a, dt);
    DiscreteModel disc;
    disc.a_d = std::exp(model.a * dt);
    disc.b_d = model.b * phi;
    disc.eps_d = model.eps_eff * phi;
    disc.noise_var = model.q * model.q * expm1_over(2.0 * model.a, dt);
    disc.dt = dt;
    if (!std::isfinite(disc.a_d) || !std::isfinite(disc.b_d) || !std::isfinite(disc.eps_d) ||
        !std::isfinite(disc.noise_var)) {
        throw NumericalError("discretization overflowed (a*dt = " + std::to_string(model.a * dt) + ")");
    }
    return disc;
}

double step(const DiscreteModel& disc, double x, double u, double z) noexcept {
    return disc.a_d * x + disc.b_d * u + disc.eps_d + std::sqrt(disc.noise_var) * z;
}

double propagate_noiseless(const ContinuousModel& model, double x0, double u_const, double t) noexcept {
    return std::exp(model.a * t) * x0 + (model.b * u_const + model.eps_eff) * expm1_over(model.a, t);
}

double step_partial_input(const ContinuousModel& model, const DiscreteModel& disc, double x, double u,
                          double on_fraction, double z) noexcept {
    const double noise = std::sqrt(disc.noise_var) * z;
    if (on_fraction >= 1.0) {
        return step(disc, x, u, 0.0) + noise;
    }
    if (on_fraction <= 0.0) {
        return step(disc, x, 0.0, 0.0) + noise;
    }
    const double t_on = on_fraction * disc.dt;
    const double mid = propagate_noiseless(model, x, u, t_on);
    return propagate_noiseless(model, mid, 0.0, disc.dt - t_on) + noise;
}

} // namespace pulse_etl
