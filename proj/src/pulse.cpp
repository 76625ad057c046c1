#include "pulse_etl/pulse.hpp"

#include <cmath>
#include <sstream>

#include "pulse_etl/errors.hpp"

namespace pulse_etl {

void ActuatorLimits::validate() const {
    if (!(u_max > 0.0) || !std::isfinite(u_max)) {
        throw ConfigError("u_max must be positive and finite");
    }
}

std::optional<double> pulse_length(const ContinuousModel& model, double x0, double u_signed) {
    if (x0 == 0.0) {
        return 0.0;
    }
    const double g = model.b * u_signed + model.eps_eff;
    if (g == 0.0) {
        return std::nullopt;
    }
    // t = (1/a) ln(g / (a x0 + g)) = -log1p(a x0 / g) / a
    const double w = model.a * x0 / g;
    double t;
    if (std::abs(w) < series_threshold) {
        t = -(x0 / g) * (1.0 - w / 2.0 + w * w / 3.0);
    } else {
        if (w <= -1.0) {
            return std::nullopt;
        }
        t = -std::log1p(w) / model.a;
    }
    if (!std::isfinite(t) || t < 0.0) {
        return std::nullopt;
    }
    return t;
}

PulseCommand plan_pulse(const ContinuousModel& model, double x0, const ActuatorLimits& limits,
                        double duration_cap) {
    if (x0 == 0.0) {
        return PulseCommand{};
    }
    const auto up = pulse_length(model, x0, limits.u_max);
    const auto down = pulse_length(model, x0, -limits.u_max);
    if (!up && !down) {
        std::ostringstream msg;
        msg << "insufficient actuator authority: neither +/-" << limits.u_max << " resets x0=" << x0
            << " (a=" << model.a << ", b=" << model.b << ", eps_eff=" << model.eps_eff << ")";
        throw InsufficientAuthority(msg.str());
    }
    PulseCommand cmd;
    if (up && (!down || *up <= *down)) {
        cmd.amplitude = limits.u_max;
        cmd.duration = *up;
    } else {
        cmd.amplitude = -limits.u_max;
        cmd.duration = *down;
    }
    if (cmd.duration > duration_cap) {
        cmd.duration = duration_cap;
        cmd.clipped = true;
    }
    return cmd;
}

} // namespace pulse_etl
