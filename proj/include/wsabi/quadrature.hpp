#pragma once

#include <Eigen/Dense>
#include <string>

#include "wsabi/gp.hpp"
#include "wsabi/types.hpp"
#include "wsabi/warp.hpp"

namespace wsabi {

/// Posterior mean and variance of the evidence Z = int l(x) pi(x) dx.
struct EvidenceEstimate {
    double mean = 0.0;
    double variance = 0.0;       // clamped to >= 0
    long long n_samples = 0;
    double wall_clock_s = 0.0;   // filled by the caller that owns the clock
    std::string method;
};

// ---------------------------------------------------------------------------
// Closed-form Gaussian integrals of SE-ARD kernels against a diagonal Gaussian
// prior pi = N(nu, Lambda). All products factorize per dimension.
// ---------------------------------------------------------------------------

/// int K(x,a) pi(x) dx
///   = lambda^2 prod_i sqrt(s_i^2/(s_i^2+L_i)) exp(-1/2 (a_i-nu_i)^2/(s_i^2+L_i))
double kernel_prior_integral(const KernelParams& params,
                             const Eigen::Ref<const Eigen::VectorXd>& a,
                             const GaussianPrior& prior);

/// W(a,b) = int K(x,a) K(x,b) pi(x) dx
double kernel_pair_prior_integral(const KernelParams& params,
                                  const Eigen::Ref<const Eigen::VectorXd>& a,
                                  const Eigen::Ref<const Eigen::VectorXd>& b,
                                  const GaussianPrior& prior);

/// int int K(x,x') pi(x) pi(x') dx dx' = lambda^2 prod_i sqrt(s_i^2/(s_i^2+2 L_i))
double kernel_double_prior_integral(const KernelParams& params, const GaussianPrior& prior);

/// T(a,b) = int int K(x,a) K(x,x') K(x',b) pi(x) pi(x') dx dx', by completing the
/// per-dimension 2x2 Gaussian quadratic form.
double cross_pair_double_integral(const KernelParams& params,
                                  const Eigen::Ref<const Eigen::VectorXd>& a,
                                  const Eigen::Ref<const Eigen::VectorXd>& b,
                                  const GaussianPrior& prior);

/// K(x,x')^2 is itself an SE kernel: output scale lambda^2, length-scales s/sqrt(2).
KernelParams squared_kernel_params(const KernelParams& params);

inline double squared_kernel_prior_integral(const KernelParams& p,
                                            const Eigen::Ref<const Eigen::VectorXd>& a,
                                            const GaussianPrior& prior) {
    return kernel_prior_integral(squared_kernel_params(p), a, prior);
}
inline double squared_kernel_pair_prior_integral(const KernelParams& p,
                                                 const Eigen::Ref<const Eigen::VectorXd>& a,
                                                 const Eigen::Ref<const Eigen::VectorXd>& b,
                                                 const GaussianPrior& prior) {
    return kernel_pair_prior_integral(squared_kernel_params(p), a, b, prior);
}
inline double squared_kernel_double_prior_integral(const KernelParams& p,
                                                   const GaussianPrior& prior) {
    return kernel_double_prior_integral(squared_kernel_params(p), prior);
}

/// u_i = int K(x, x_i) pi(x) dx for row-wise points X.
Eigen::VectorXd prior_integral_vector(const KernelParams& params, const Eigen::MatrixXd& X,
                                      const GaussianPrior& prior);

/// W_ij = int K(x,x_i) K(x,x_j) pi(x) dx.
Eigen::MatrixXd pair_integral_matrix(const KernelParams& params, const Eigen::MatrixXd& X,
                                     const GaussianPrior& prior);

/// T_ij = int int K(x,x_i) K(x,x') K(x',x_j) pi pi.
Eigen::MatrixXd cross_integral_matrix(const KernelParams& params, const Eigen::MatrixXd& X,
                                      const GaussianPrior& prior);

// ---------------------------------------------------------------------------
// Evidence estimates
// ---------------------------------------------------------------------------

/// WSABI-L: mean = alpha + 1/2 z'Wz, variance = z'Tz - z'W(K+jI)^{-1}Wz.
EvidenceEstimate evidence_wsabi_l(const WarpedModel& model, const GaussianPrior& prior);

/// WSABI-M: mean = alpha + 1/2 (z'Wz + lambda^2 - tr((K+jI)^{-1}W)),
/// variance = 1/2 (int int K^2 pipi - 2 tr(K^{-1}T) + tr((K^{-1}W)^2)) + z'Tz - z'WK^{-1}Wz.
EvidenceEstimate evidence_wsabi_m(const WarpedModel& model, const GaussianPrior& prior);

/// Bayes-Hermite quadrature with the GP directly on the raw likelihood:
/// mean = u'K^{-1}y, variance = int int K pipi - u'K^{-1}u.
EvidenceEstimate evidence_bmc(const Dataset& raw_data, const KernelParams& params,
                              const GaussianPrior& prior, double base_jitter = -1.0);

/// Same, reusing an already-fitted GP on the raw likelihood values.
EvidenceEstimate evidence_bmc(const GpPosterior& gp, const GaussianPrior& prior);

/// No-data limit: mean 0, variance = int int K pipi.
EvidenceEstimate evidence_bmc(const KernelParams& params, const GaussianPrior& prior);

}  // namespace wsabi
