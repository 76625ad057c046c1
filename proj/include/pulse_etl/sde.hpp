#pragma once

// Scalar linear SDE plant
//
//     dx = (a x + b u + eps) dt + q dW
//
// with exact zero-order-hold discretization. `eps` is always the effective
// additive disturbance; input-side loads are folded in by
// make_effective_disturbance().

namespace pulse_etl {

enum class DisturbanceEntry { additive, input_side };

struct ContinuousModel {
    double a = 0.0;       // drift [1/s]
    double b = 0.0;       // input gain
    double eps_eff = 0.0; // effective additive disturbance [state/s]
    double q = 0.0;       // diffusion coefficient multiplying dW

    /// Throws ConfigError if a field is non-finite or q < 0.
    void validate() const;

    friend bool operator==(const ContinuousModel&, const ContinuousModel&) = default;
};

struct DiscreteModel {
    double a_d = 1.0;
    double b_d = 0.0;
    double eps_d = 0.0;
    double noise_var = 0.0;
    double dt = 0.0;
};

struct SimState {
    double x = 0.0;
    double t = 0.0;
};

/// Below this |a t| the (e^{a t} - 1)/a family switches to its Taylor series.
inline constexpr double series_threshold = 1e-8;

/// (e^{a t} - 1) / a, with the limit t at a -> 0.
[[nodiscard]] double expm1_over(double a, double t) noexcept;

[[nodiscard]] double make_effective_disturbance(double load, DisturbanceEntry entry, double b) noexcept;

/// Throws NumericalError when a coefficient overflows.
[[nodiscard]] DiscreteModel discretize(const ContinuousModel& model, double dt);

[[nodiscard]] double step(const DiscreteModel& disc, double x, double u, double z) noexcept;

/// Noiseless closed-form solution under constant input.
[[nodiscard]] double propagate_noiseless(const ContinuousModel& model, double x0, double u_const,
                                         double t) noexcept;

/// One step of length disc.dt where input `u` is held only for the first
/// `on_fraction` of the step and is zero afterwards. Used for pulses whose
/// end falls between grid points.
[[nodiscard]] double step_partial_input(const ContinuousModel& model, const DiscreteModel& disc,
                                        double x, double u, double on_fraction, double z) noexcept;

} // namespace pulse_etl
