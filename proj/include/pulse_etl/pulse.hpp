#pragma once

#include <limits>
#include <optional>

#include "pulse_etl/sde.hpp"

namespace pulse_etl {

struct ActuatorLimits {
    double u_max = 1.0;

    void validate() const;
};

/// What the controller transmits: a saturated input held for `duration`.
struct PulseCommand {
    double amplitude = 0.0; // +u_max, -u_max or 0
    double duration = 0.0;  // [s]
    bool clipped = false;   // duration hit the cap
};

/// Time for which `u_signed` must be held so that the noiseless state
/// starting at x0 reaches zero. Empty when this sign cannot do it.
[[nodiscard]] std::optional<double> pulse_length(const ContinuousModel& model, double x0, double u_signed);

/// Tries both +u_max and -u_max and returns the feasible command with the
/// shorter duration, clipped to `duration_cap`.
/// Throws InsufficientAuthority when neither sign is feasible.
[[nodiscard]] PulseCommand plan_pulse(const ContinuousModel& model, double x0, const ActuatorLimits& limits,
                                      double duration_cap = std::numeric_limits<double>::infinity());

/// Idealized impulse reset: F = -N(t_k)/b sends the scalar state to 0.
[[nodiscard]] constexpr double dirac_reset(double /*x*/) noexcept { return 0.0; }

} // namespace pulse_etl
