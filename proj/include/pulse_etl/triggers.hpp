#pragma once

#include <cstddef>
#include <vector>

namespace pulse_etl {

struct StateTriggerConfig {
    double delta = 0.02;

    void validate() const;
};

/// Communication event: |x| >= delta.
[[nodiscard]] bool state_trigger(double x, const StateTriggerConfig& cfg) noexcept;

/// Hoeffding threshold tau_max * sqrt(-(2/N) ln(eta/4)).
/// Throws std::domain_error unless 0 < eta < 1 and n_window > 0.
[[nodiscard]] double kappa(double eta, std::size_t n_window, double tau_max);

struct LearnTriggerConfig {
    double eta = 0.05;
    std::size_t n_window = 2000;
    std::size_t m_sim = 10000;
    double tau_max = 1.0;
    double kappa = 0.0;

    /// Builds a config with kappa filled in from (eta, n_window, tau_max).
    static LearnTriggerConfig make(double eta, std::size_t n_window, std::size_t m_sim, double tau_max);

    void validate() const;
};

/// Ring buffer over the last n_window stopping times, each capped at tau_max.
class StoppingTimeWindow {
public:
    StoppingTimeWindow(std::size_t capacity, double tau_max);

    /// Stores min(tau, tau_max), evicting the oldest value when full.
    /// Throws std::invalid_argument unless tau > 0.
    void record(double tau);
    void reset() noexcept;

    [[nodiscard]] bool full() const noexcept { return count_ >= values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
    [[nodiscard]] std::size_t size() const noexcept;
    [[nodiscard]] std::size_t capacity() const noexcept { return values_.size(); }
    [[nodiscard]] std::size_t count_since_reset() const noexcept { return count_; }
    [[nodiscard]] double tau_max() const noexcept { return tau_max_; }

    /// Mean of the stored values, oldest first summation. NaN when empty.
    [[nodiscard]] double mean() const noexcept;

    /// Stored values in insertion order (oldest first).
    [[nodiscard]] std::vector<double> values() const;

private:
    std::vector<double> values_;
    std::size_t head_ = 0; // next write slot
    std::size_t count_ = 0;
    double tau_max_;
};

/// |mean(window) - expected_tau| >= kappa. Throws WindowNotFull when the
/// window has fewer than n_window samples since its last reset.
[[nodiscard]] bool learn_trigger(const StoppingTimeWindow& window, double expected_tau,
                                 const LearnTriggerConfig& cfg);

} // namespace pulse_etl
