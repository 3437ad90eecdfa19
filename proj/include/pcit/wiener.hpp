#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "pcit/design.hpp"
#include "pcit/errors.hpp"
#include "pcit/rng.hpp"

namespace pcit {

/**
 * @brief Parameters of the data-generating model.
 *
 * Curves g, h are independent integrated Wiener processes scaled by sigma0;
 * error pairs are bivariate normal with correlation rho and equal marginal
 * standard deviation sigma_eps. The noise-to-signal ratio lambda is always
 * recomputed from the stored scales, never stored on its own.
 */
struct GeneratingModel {
    GeneratingModel(double sigma0, double sigma_eps, double rho)
        : sigma0(sigma0), sigma_eps(sigma_eps), rho(rho) {
        if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
        if (!(sigma_eps >= 0.0)) throw std::invalid_argument("sigma_eps must be >= 0");
        if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("|rho| must be <= 1");
    }

    static GeneratingModel from_lambda(double lambda, double rho) {
        if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
        return GeneratingModel(1.0, lambda, rho);
    }

    double lambda() const { return sigma_eps / sigma0; }

    /// Same curves and errors expressed in units of sigma0 = 1. A common
    /// rescaling of (sigma0, sigma_eps) maps to the identical normalized
    /// model, which is what makes simulation statistics scale-free.
    GeneratingModel normalized() const { return GeneratingModel(1.0, lambda(), rho); }

    double sigma0;
    double sigma_eps;
    double rho;
};

/// One sample of n (x, y, z) triples.
struct Dataset {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> z;

    std::size_t size() const { return x.size(); }
};

/// A simulated dataset together with the truths that produced it, kept for
/// oracle comparisons.
struct SimulatedData {
    Dataset data;
    Eigen::VectorXd true_g, true_h;
    Eigen::VectorXd true_eps_y, true_eps_z;
};

/**
 * @brief Covariance kernel of the scaled integrated Wiener process.
 *
 * For g(x) = sigma0 * \int_0^x W_t dt,
 *   Cov(g(s), g(t)) = sigma0^2 * (min^2 * max / 2 - min^3 / 6).
 */
inline double iwp_kernel(double s, double t, double sigma0) {
    if (!(s >= 0.0 && s <= 1.0) || !(t >= 0.0 && t <= 1.0))
        throw std::domain_error("iwp_kernel: arguments must lie in [0, 1]");
    if (!(sigma0 > 0.0)) throw std::domain_error("iwp_kernel: sigma0 must be > 0");
    double lo = std::min(s, t);
    double hi = std::max(s, t);
    return sigma0 * sigma0 * (lo * lo * hi / 2.0 - lo * lo * lo / 6.0);
}

/// Kernel matrix K with K(i,j) = iwp_kernel(x_i, x_j, sigma0). Symmetric
/// positive semi-definite; ties in x are allowed (they make K singular,
/// which downstream factorizations handle with jitter).
inline Eigen::MatrixXd build_covariance(std::span<const double> x, double sigma0) {
    const auto n = Eigen::Index(x.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            double v = iwp_kernel(x[std::size_t(i)], x[std::size_t(j)], sigma0);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

inline Eigen::MatrixXd build_covariance(const DesignPoints& x, double sigma0) {
    return build_covariance(x.values(), sigma0);
}

/// Cholesky factor plus the diagonal jitter that was needed to get it.
struct JitteredFactor {
    Eigen::MatrixXd lower;
    double jitter = 0.0;
};

/**
 * @brief Lower Cholesky factor of k, adding diagonal jitter if needed.
 *
 * The kernel matrix is severely ill-conditioned for large n, so a plain
 * factorization is attempted first and 1e-10 * trace/n is added to the
 * diagonal on failure (escalating a few decades before giving up).
 */
inline JitteredFactor cholesky_with_jitter(const Eigen::MatrixXd& k) {
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) return {llt.matrixL(), 0.0};

    const auto n = k.rows();
    double jitter = 1e-10 * k.trace() / double(n);
    if (!(jitter > 0.0)) jitter = 1e-300;
    for (int attempt = 0; attempt < 4; ++attempt) {
        Eigen::MatrixXd kj = k;
        kj.diagonal().array() += jitter;
        llt.compute(kj);
        if (llt.info() == Eigen::Success) return {llt.matrixL(), jitter};
        jitter *= 1e3;
    }
    throw numerical_error("covariance factorization failed even after jitter");
}

/// Realizations of the two curves at the design points.
struct SampledCurvePair {
    Eigen::VectorXd g_vals;
    Eigen::VectorXd h_vals;
    double jitter = 0.0;
};

namespace detail {

inline Eigen::VectorXd standard_normal_vector(Eigen::Index n, Rng& rng) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.gaussian();
    return v;
}

}  // namespace detail

/**
 * @brief Draw independent realizations of g and h at the design points.
 *
 * Sampling goes through the unit-scale factor: L = chol(K_1 + jitter) with
 * K_1 the sigma0 = 1 kernel matrix, and g = sigma0 * (L z). This makes the
 * draw exactly linear in sigma0 for a fixed stream.
 */
inline SampledCurvePair sample_curve_pair(std::span<const double> x, double sigma0, Rng& rng) {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
    JitteredFactor f = cholesky_with_jitter(build_covariance(x, 1.0));
    const auto n = Eigen::Index(x.size());
    Eigen::VectorXd zg = detail::standard_normal_vector(n, rng);
    Eigen::VectorXd zh = detail::standard_normal_vector(n, rng);
    SampledCurvePair out;
    out.g_vals = sigma0 * (f.lower * zg);
    out.h_vals = sigma0 * (f.lower * zh);
    out.jitter = f.jitter;
    return out;
}

inline SampledCurvePair sample_curve_pair(const DesignPoints& x, double sigma0, Rng& rng) {
    return sample_curve_pair(x.values(), sigma0, rng);
}

/// Correlated standard-normal error pair: e_z = rho e_y + sqrt(1-rho^2) e2.
/// With rho = 1 the two draws are bitwise equal.
inline void draw_error_pair(double rho, Rng& rng, double& e_y, double& e_z) {
    double n1 = rng.gaussian();
    double n2 = rng.gaussian();
    e_y = n1;
    e_z = rho * n1 + std::sqrt(1.0 - rho * rho) * n2;
}

/**
 * @brief Generate one dataset under the model: y = g(x) + eps_Y, z = h(x) + eps_Z.
 *
 * Deterministic given the stream. True curves and errors are returned for
 * oracle comparisons.
 */
inline SimulatedData gen_dataset(const DesignPoints& x, const GeneratingModel& model, Rng& rng) {
    const auto n = Eigen::Index(x.size());
    SampledCurvePair curves = sample_curve_pair(x.values(), model.sigma0, rng);
    SimulatedData out;
    out.true_g = std::move(curves.g_vals);
    out.true_h = std::move(curves.h_vals);
    out.true_eps_y.resize(n);
    out.true_eps_z.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double e_y, e_z;
        draw_error_pair(model.rho, rng, e_y, e_z);
        out.true_eps_y[i] = model.sigma_eps * e_y;
        out.true_eps_z[i] = model.sigma_eps * e_z;
    }
    out.data.x.assign(x.values().begin(), x.values().end());
    out.data.y.resize(std::size_t(n));
    out.data.z.resize(std::size_t(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        out.data.y[std::size_t(i)] = out.true_g[i] + out.true_eps_y[i];
        out.data.z[std::size_t(i)] = out.true_h[i] + out.true_eps_z[i];
    }
    return out;
}

}  // namespace pcit
