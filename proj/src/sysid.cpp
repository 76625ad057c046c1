#include "pulse_etl/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "pulse_etl/errors.hpp"

namespace pulse_etl {

namespace {

constexpr double rank_threshold = 1e-10;

double continuous_drift(const LsEstimate& est, double dt) {
    if (!(est.a_d > 0.0) || !std::isfinite(est.a_d)) {
        throw NonInvertibleDiscretization("identified a_d = " + std::to_string(est.a_d) +
                                          " has no real continuous-time logarithm");
    }
    return std::log1p(est.a_d_minus_1) / dt;
}

} // namespace

LsEstimate least_squares_fit(const Dataset& data, DisturbanceMode mode) {
    const auto n = static_cast<Eigen::Index>(data.samples.size());
    if (n < 3) {
        throw RankDeficient("least squares needs at least 3 samples, got " + std::to_string(n));
    }

    // Regress the increment x_{k+1} - x_k so that the first coefficient is
    // a_d - 1 directly; near a_d = 1 this keeps full relative precision.
    Eigen::MatrixXd regressors(n, 3);
    Eigen::VectorXd target(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Sample& s = data.samples[static_cast<std::size_t>(k)];
        regressors(k, 0) = s.x;
        regressors(k, 1) = s.u;
        regressors(k, 2) = 1.0;
        target(k) = s.x_next - s.x;
    }

    Eigen::Vector3d scale = regressors.cwiseAbs().colwise().maxCoeff().transpose();
    for (int j = 0; j < 3; ++j) {
        if (scale(j) == 0.0) {
            throw RankDeficient("regressor column " + std::to_string(j) + " is identically zero");
        }
    }
    regressors = regressors * scale.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(regressors);
    qr.setThreshold(rank_threshold);
    if (qr.rank() < 3) {
        throw RankDeficient("regressors (x, u, 1) are collinear; rank " + std::to_string(qr.rank()));
    }
    const Eigen::Vector3d coef_scaled = qr.solve(target);
    const Eigen::Vector3d coef = coef_scaled.cwiseQuotient(scale);

    const Eigen::VectorXd resid = target - regressors * coef_scaled;
    const double dof = static_cast<double>(n > 3 ? n - 3 : 1);
    const double resid_var = resid.squaredNorm() / dof;

    // Cov(coef) = sigma^2 (X^T X)^{-1}; with X P = Q R that is P R^{-1} R^{-T} P^T.
    const Eigen::Matrix3d r = qr.matrixR().topLeftCorner(3, 3).triangularView<Eigen::Upper>();
    const Eigen::Matrix3d r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::Matrix3d::Identity());
    const Eigen::Matrix3d perm = qr.colsPermutation();
    const Eigen::Matrix3d cov_scaled = perm * (r_inv * r_inv.transpose()) * perm.transpose() * resid_var;

    LsEstimate est;
    est.mode = mode;
    est.n_samples = static_cast<std::size_t>(n);
    est.a_d_minus_1 = coef(0);
    est.a_d = 1.0 + coef(0);
    est.b_d = coef(1);
    est.resid_var = resid_var;
    for (int j = 0; j < 3; ++j) {
        est.std_errors[static_cast<std::size_t>(j)] = std::sqrt(std::max(cov_scaled(j, j), 0.0)) / scale(j);
    }
    if (mode == DisturbanceMode::sensor_bias) {
        if (std::abs(est.a_d_minus_1) < 1e-9) {
            throw BiasUnidentifiable("sensor bias is unidentifiable when a_d is 1 (|1 - a_d| < 1e-9)");
        }
        est.dist_term = coef(2) / -est.a_d_minus_1;
    } else {
        est.dist_term = coef(2);
    }
    return est;
}

double estimate_noise(const LsEstimate& estimate, double dt) {
    const double a = continuous_drift(estimate, dt);
    if (estimate.resid_var <= 0.0) {
        return 0.0;
    }
    return std::sqrt(estimate.resid_var / expm1_over(2.0 * a, dt));
}

ContinuousModel to_continuous(const LsEstimate& estimate, double dt) {
    const double a = continuous_drift(estimate, dt);
    const double phi = expm1_over(a, dt);
    ContinuousModel model;
    model.a = a;
    model.b = estimate.b_d / phi;
    model.eps_eff = estimate.mode == DisturbanceMode::load_disturbance ? estimate.dist_term / phi : 0.0;
    model.q = estimate_noise(estimate, dt);
    return model;
}

} // namespace pulse_etl
