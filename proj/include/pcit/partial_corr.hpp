#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "pcit/errors.hpp"
#include "pcit/smoother.hpp"

namespace pcit {

struct PartialCorrResult {
    double r_hat = 0.0;
    std::size_t n = 0;
    EstimatorKind method = EstimatorKind::spline;
};

/**
 * @brief Sample partial correlation of a residual pair.
 *
 * r = sum(e_y e_z) / sqrt(sum(e_y^2) sum(e_z^2)), with raw products: the
 * residuals are deliberately not re-centered here, centering is the
 * smoother's job. Clamped into [-1, 1] against rounding overshoot.
 */
inline PartialCorrResult partial_correlation(const ResidualPair& res) {
    const auto n = res.eps_y_hat.size();
    if (n < 3) throw std::invalid_argument("partial_correlation: need n >= 3");
    if (res.eps_z_hat.size() != n)
        throw std::invalid_argument("partial_correlation: residual lengths differ");
    const double ss_y = res.eps_y_hat.squaredNorm();
    const double ss_z = res.eps_z_hat.squaredNorm();
    if (ss_y == 0.0 || ss_z == 0.0)
        throw degenerate_data_error("partial_correlation: a residual vector is identically zero");
    const double r = res.eps_y_hat.dot(res.eps_z_hat) / std::sqrt(ss_y * ss_z);
    return {std::clamp(r, -1.0, 1.0), std::size_t(n), res.method};
}

struct TStatistic {
    double value = 0.0;
    std::size_t dof = 0;
};

/// Classical t-statistic sqrt(n-2-d) * r / sqrt(1-r^2) with n-2-d degrees
/// of freedom; valid as a reference distribution only for the linear
/// least-squares path under normality.
inline TStatistic t_statistic(double r_hat, std::size_t n, std::size_t d) {
    if (n < 3 + d) throw std::domain_error("t_statistic: need n - 2 - d >= 1");
    if (!(std::abs(r_hat) < 1.0))
        throw std::domain_error("t_statistic: |r| must be < 1");
    const std::size_t dof = n - 2 - d;
    return {std::sqrt(double(dof)) * r_hat / std::sqrt(1.0 - r_hat * r_hat), dof};
}

}  // namespace pcit
