#include "pulse_etl/triggers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pulse_etl/errors.hpp"

namespace pulse_etl {

void StateTriggerConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ConfigError("trigger threshold delta must be positive");
    }
}

bool state_trigger(double x, const StateTriggerConfig& cfg) noexcept {
    return std::abs(x) >= cfg.delta;
}

double kappa(double eta, std::size_t n_window, double tau_max) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::domain_error("kappa: eta must lie in (0, 1), got " + std::to_string(eta));
    }
    if (n_window == 0) {
        throw std::domain_error("kappa: N must be positive");
    }
    if (!(tau_max > 0.0)) {
        throw std::domain_error("kappa: tau_max must be positive");
    }
    return tau_max * std::sqrt(-(2.0 / static_cast<double>(n_window)) * std::log(eta / 4.0));
}

LearnTriggerConfig LearnTriggerConfig::make(double eta, std::size_t n_window, std::size_t m_sim, double tau_max) {
    LearnTriggerConfig cfg{eta, n_window, m_sim, tau_max, pulse_etl::kappa(eta, n_window, tau_max)};
    cfg.validate();
    return cfg;
}

void LearnTriggerConfig::validate() const {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw ConfigError("learn.eta must lie in (0, 1)");
    }
    if (n_window == 0) {
        throw ConfigError("learn.N must be positive");
    }
    if (m_sim <= n_window) {
        throw ConfigError("learn.M must exceed learn.N");
    }
    if (!(tau_max > 0.0)) {
        throw ConfigError("learn.tau_max must be positive");
    }
    const double expected = pulse_etl::kappa(eta, n_window, tau_max);
    if (std::abs(kappa - expected) > 1e-12 * expected) {
        throw ConfigError("learn trigger kappa is inconsistent with (eta, N, tau_max)");
    }
}

StoppingTimeWindow::StoppingTimeWindow(std::size_t capacity, double tau_max)
    : values_(capacity, 0.0), tau_max_(tau_max) {
    if (capacity == 0) {
        throw std::invalid_argument("stopping-time window capacity must be positive");
    }
    if (!(tau_max > 0.0)) {
        throw std::invalid_argument("stopping-time window needs tau_max > 0");
    }
}

void StoppingTimeWindow::record(double tau) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("stopping time must be positive, got " + std::to_string(tau));
    }
    values_[head_] = std::min(tau, tau_max_);
    head_ = (head_ + 1) % values_.size();
    ++count_;
}

void StoppingTimeWindow::reset() noexcept {
    head_ = 0;
    count_ = 0;
}

std::size_t StoppingTimeWindow::size() const noexcept {
    return std::min(count_, values_.size());
}

std::vector<double> StoppingTimeWindow::values() const {
    const std::size_t n = size();
    std::vector<double> out;
    out.reserve(n);
    const std::size_t start = (head_ + values_.size() - n) % values_.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(values_[(start + i) % values_.size()]);
    }
    return out;
}

double StoppingTimeWindow::mean() const noexcept {
    const std::size_t n = size();
    if (n == 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const std::size_t start = (head_ + values_.size() - n) % values_.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += values_[(start + i) % values_.size()];
    }
    return sum / static_cast<double>(n);
}

bool learn_trigger(const StoppingTimeWindow& window, double expected_tau, const LearnTriggerConfig& cfg) {
    if (window.count_since_reset() < cfg.n_window || window.size() < cfg.n_window) {
        throw WindowNotFull("learning trigger evaluated with " + std::to_string(window.count_since_reset()) +
                            " of " + std::to_string(cfg.n_window) + " stopping times");
    }
    return std::abs(window.mean() - expected_tau) >= cfg.kappa;
}

} // namespace pulse_etl
