#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <span>
#include <stdexcept>
#include <string>

#include "pcit/errors.hpp"
#include "pcit/wiener.hpp"

namespace pcit {

/// Which marginal-regression estimator produced a set of residuals.
enum class EstimatorKind { spline, linear, oracle_true_curves };

inline const char* to_string(EstimatorKind e) {
    switch (e) {
        case EstimatorKind::spline: return "spline";
        case EstimatorKind::linear: return "linear";
        default: return "oracle-true-curves";
    }
}

inline EstimatorKind estimator_from_string(const std::string& s) {
    if (s == "spline") return EstimatorKind::spline;
    if (s == "linear") return EstimatorKind::linear;
    if (s == "oracle-true-curves" || s == "oracle") return EstimatorKind::oracle_true_curves;
    throw std::invalid_argument("unknown estimator: " + s);
}

/**
 * @brief Smoothing parameters for one response variable.
 *
 * The fitted spline depends on the data only through the noise-to-signal
 * ratio lambda_hat = sigma_eps_hat / sigma0_hat, which is recomputed from
 * the stored scales on every use.
 */
struct SmootherConfig {
    SmootherConfig(double sigma0_hat, double sigma_eps_hat)
        : sigma0_hat(sigma0_hat), sigma_eps_hat(sigma_eps_hat) {
        if (!(sigma0_hat > 0.0)) throw std::invalid_argument("sigma0_hat must be > 0");
        if (!(sigma_eps_hat >= 0.0)) throw std::invalid_argument("sigma_eps_hat must be >= 0");
    }

    static SmootherConfig from_lambda(double lambda_hat) {
        if (!(lambda_hat >= 0.0)) throw std::invalid_argument("lambda_hat must be >= 0");
        return SmootherConfig(1.0, lambda_hat);
    }

    double lambda_hat() const { return sigma_eps_hat / sigma0_hat; }

    double sigma0_hat;
    double sigma_eps_hat;
};

/**
 * @brief Cubic-spline smoother at the design points.
 *
 * Fitted values are K (K + lambda^2 I)^{-1} applied to the mean-centered
 * response, with the mean added back; K is the unit-scale integrated-Wiener
 * kernel matrix. The solve uses an SPD factorization of (K + lambda^2 I),
 * never an explicit inverse. With lambda = 0 the system may be singular;
 * the factorization falls back to the jittered matrix and reports
 * "interpolation infeasible" if that also fails.
 *
 * Immutable after construction, so one instance can serve many threads.
 */
class SplineSmoother {
  public:
    SplineSmoother(std::span<const double> x, double lambda_hat)
        : kernel_(build_covariance(x, 1.0)), lambda_hat_(lambda_hat) {
        if (!(lambda_hat >= 0.0)) throw std::invalid_argument("lambda_hat must be >= 0");
        Eigen::MatrixXd system = kernel_;
        system.diagonal().array() += lambda_hat * lambda_hat;
        Eigen::LLT<Eigen::MatrixXd> llt(system);
        if (llt.info() == Eigen::Success) {
            llt_ = std::move(llt);
            return;
        }
        double jitter = 1e-10 * system.trace() / double(system.rows());
        for (int attempt = 0; attempt < 4; ++attempt) {
            Eigen::MatrixXd jittered = system;
            jittered.diagonal().array() += jitter;
            llt.compute(jittered);
            if (llt.info() == Eigen::Success) {
                llt_ = std::move(llt);
                jitter_ = jitter;
                return;
            }
            jitter *= 1e3;
        }
        if (lambda_hat == 0.0)
            throw numerical_error("interpolation infeasible: kernel matrix is rank-deficient");
        throw numerical_error("smoothing system factorization failed");
    }

    /// Fitted values at the design points (same length as y).
    Eigen::VectorXd fit(const Eigen::VectorXd& y) const {
        if (y.size() != kernel_.rows())
            throw std::invalid_argument("fit_spline: response length does not match design");
        const double mean = y.mean();
        Eigen::VectorXd centered = y.array() - mean;
        Eigen::VectorXd fitted = kernel_ * llt_.solve(centered);
        fitted.array() += mean;
        return fitted;
    }

    double lambda_hat() const { return lambda_hat_; }
    double jitter() const { return jitter_; }
    const Eigen::MatrixXd& kernel() const { return kernel_; }

  private:
    Eigen::MatrixXd kernel_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double lambda_hat_;
    double jitter_ = 0.0;
};

inline Eigen::VectorXd fit_spline(std::span<const double> x, const Eigen::VectorXd& y,
                                  const SmootherConfig& cfg) {
    if (std::size_t(y.size()) != x.size())
        throw std::invalid_argument("fit_spline: x and y lengths differ");
    return SplineSmoother(x, cfg.lambda_hat()).fit(y);
}

/// Residual vectors after removing the marginal regressions, plus the
/// fitted curves themselves.
struct ResidualPair {
    Eigen::VectorXd eps_y_hat;
    Eigen::VectorXd eps_z_hat;
    Eigen::VectorXd fitted_g;
    Eigen::VectorXd fitted_h;
    EstimatorKind method = EstimatorKind::spline;

    std::size_t size() const { return std::size_t(eps_y_hat.size()); }
};

namespace detail {

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
}

}  // namespace detail

/// Residuals from two prebuilt smoothers (the cached path used in sweeps).
inline ResidualPair residuals_from(const Dataset& data, const SplineSmoother& smoother_y,
                                   const SplineSmoother& smoother_z) {
    ResidualPair out;
    Eigen::VectorXd y = detail::to_eigen(data.y);
    Eigen::VectorXd z = detail::to_eigen(data.z);
    out.fitted_g = smoother_y.fit(y);
    out.fitted_h = smoother_z.fit(z);
    out.eps_y_hat = y - out.fitted_g;
    out.eps_z_hat = z - out.fitted_h;
    out.method = EstimatorKind::spline;
    return out;
}

/// eps_Y = y - ghat(x), eps_Z = z - hhat(x), with spline fits per response.
inline ResidualPair residuals(const Dataset& data, const SmootherConfig& cfg_y,
                              const SmootherConfig& cfg_z) {
    SplineSmoother sy(data.x, cfg_y.lambda_hat());
    SplineSmoother sz(data.x, cfg_z.lambda_hat());
    return residuals_from(data, sy, sz);
}

/**
 * @brief Ordinary least-squares line fitted at the design points.
 *
 * The deliberately wrong baseline for nonlinear curves.
 */
inline Eigen::VectorXd ols_fit(std::span<const double> x, const Eigen::VectorXd& y) {
    const auto n = Eigen::Index(x.size());
    if (n < 3) throw std::invalid_argument("ols_fit: need n >= 3");
    if (y.size() != n) throw std::invalid_argument("ols_fit: x and y lengths differ");
    double x_mean = 0.0;
    for (double v : x) x_mean += v;
    x_mean /= double(n);
    const double y_mean = y.mean();
    double sxx = 0.0, sxy = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dx = x[std::size_t(i)] - x_mean;
        sxx += dx * dx;
        sxy += dx * (y[i] - y_mean);
    }
    if (sxx == 0.0) throw degenerate_data_error("ols_fit: design is constant");
    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * x_mean;
    Eigen::VectorXd fitted(n);
    for (Eigen::Index i = 0; i < n; ++i) fitted[i] = intercept + slope * x[std::size_t(i)];
    return fitted;
}

inline ResidualPair ols_residuals(const Dataset& data) {
    ResidualPair out;
    Eigen::VectorXd y = detail::to_eigen(data.y);
    Eigen::VectorXd z = detail::to_eigen(data.z);
    out.fitted_g = ols_fit(data.x, y);
    out.fitted_h = ols_fit(data.x, z);
    out.eps_y_hat = y - out.fitted_g;
    out.eps_z_hat = z - out.fitted_h;
    out.method = EstimatorKind::linear;
    return out;
}

/// True-error residuals, available only in simulation.
inline ResidualPair oracle_residuals(const SimulatedData& sim) {
    ResidualPair out;
    out.eps_y_hat = sim.true_eps_y;
    out.eps_z_hat = sim.true_eps_z;
    out.fitted_g = sim.true_g;
    out.fitted_h = sim.true_h;
    out.method = EstimatorKind::oracle_true_curves;
    return out;
}

}  // namespace pcit
