#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "wsabi/kernel.hpp"
#include "wsabi/types.hpp"

namespace wsabi {

// Jitter policy: start at kBaseJitterScale * lambda^2, escalate x10 up to
// kMaxJitterScale * lambda^2, then give up.
constexpr double kBaseJitterScale = 1e-10;
constexpr double kMaxJitterScale = 1e-4;

/// Zero-mean GP conditioned on a dataset, frozen after construction.
/// Holds the Cholesky factor of K + jitter*I and the weight vector
/// z = (K + jitter*I)^{-1} y. The empty state (N = 0) represents the
/// unconditioned prior process.
class GpPosterior {
public:
    /// Fit on data, escalating jitter from base_jitter (x10 per attempt) until the
    /// Cholesky succeeds. base_jitter < 0 selects the default 1e-10*lambda^2.
    static GpPosterior fit(const Dataset& data, const KernelParams& params,
                           double base_jitter = -1.0);

    /// Unconditioned prior process (no data): mean 0, cov = K.
    static GpPosterior prior(const KernelParams& params, int dim);

    double mean(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    double cov(const Eigen::Ref<const Eigen::VectorXd>& x,
               const Eigen::Ref<const Eigen::VectorXd>& y) const;
    /// Posterior variance at x, clamped to [0, lambda^2 + jitter].
    double var(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// Posterior variance before clamping.
    double var_raw(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    /// (K + jitter I)^{-1} B via the stored Cholesky factor.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const;
    /// L^{-1} B (forward substitution against the lower factor).
    Eigen::MatrixXd half_solve(const Eigen::MatrixXd& B) const;

    Eigen::VectorXd cross(const Eigen::Ref<const Eigen::VectorXd>& x) const {
        return kernel_cross(params_, locations_, x);
    }

    const Eigen::MatrixXd& locations() const { return locations_; }
    const Eigen::VectorXd& values() const { return values_; }
    const Eigen::MatrixXd& chol() const { return chol_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    const KernelParams& params() const { return params_; }
    double jitter() const { return jitter_; }
    int count() const { return static_cast<int>(locations_.rows()); }
    int dim() const { return dim_; }

private:
    GpPosterior() = default;

    Eigen::MatrixXd locations_;  // N x D
    Eigen::VectorXd values_;     // N
    KernelParams params_;
    Eigen::MatrixXd chol_;       // lower-triangular factor of K + jitter I
    Eigen::VectorXd weights_;    // (K + jitter I)^{-1} values
    double jitter_ = 0.0;
    int dim_ = 0;
};

GpPosterior fit_posterior(const Dataset& data, const KernelParams& params,
                          double base_jitter = -1.0);

inline double posterior_mean(const GpPosterior& gp, const Eigen::Ref<const Eigen::VectorXd>& x) {
    return gp.mean(x);
}
inline double posterior_cov(const GpPosterior& gp, const Eigen::Ref<const Eigen::VectorXd>& x,
                            const Eigen::Ref<const Eigen::VectorXd>& y) {
    return gp.cov(x, y);
}

/// log p(y | X, params) = -1/2 y'(K+jI)^{-1}y - 1/2 log|K+jI| - N/2 log 2pi,
/// at the given fixed jitter (no escalation). Throws IllConditionedError if the
/// factorization fails.
double log_marginal_likelihood(const Dataset& data, const KernelParams& params, double jitter);

/// Same, also writing the gradient with respect to the log-parameters
/// (log lambda, log sigma_1, ..., log sigma_D) when grad is non-null.
double log_marginal_likelihood(const Dataset& data, const KernelParams& params, double jitter,
                               Eigen::VectorXd* grad_log_params);

/// Box bounds for ML-II, in natural (not log) parameter units.
struct HyperBounds {
    double output_scale_min = 1e-6, output_scale_max = 1e6;
    Eigen::VectorXd length_min, length_max;

    static HyperBounds from_data(const Dataset& data);
    static HyperBounds from_prior_scales(const Eigen::VectorXd& prior_stddev, double value_scale);
};

struct HyperFit {
    KernelParams params;
    double log_marginal = 0.0;
    bool all_starts_failed = false;  // every start failed numerically; params == init
};

/// ML-II in log-parameter space: multi-start gradient ascent with backtracking.
/// The returned parameters are never worse (in log marginal likelihood, at the
/// policy jitter 1e-10*lambda^2) than init. Deterministic for a fixed seed.
HyperFit optimize_hyperparams(const Dataset& data, const KernelParams& init, int restarts,
                              std::uint64_t seed = 0,
                              const std::optional<HyperBounds>& bounds = std::nullopt);

}  // namespace wsabi
