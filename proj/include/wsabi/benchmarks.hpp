#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "wsabi/run.hpp"
#include "wsabi/types.hpp"

namespace wsabi {

// ---------------------------------------------------------------------------
// Synthetic Gaussian-mixture likelihoods with analytic evidence
// ---------------------------------------------------------------------------

struct MixtureLikelihood {
    Eigen::VectorXd weights;    // K, on the simplex
    Eigen::MatrixXd means;      // K x D
    Eigen::MatrixXd variances;  // K x D, axis-aligned component covariances
    double domain_half_width = 1.0;

    int components() const { return static_cast<int>(weights.size()); }
    int dim() const { return static_cast<int>(means.cols()); }
};

/// Lumpy likelihood surface: K ~ U{5..14} axis-aligned Gaussians; means uniform
/// over the centered box of half the domain half-width per axis; per-axis sd an
/// integer U{21..29} times domain_half_width/100; weights by stick-breaking
/// (sorted uniform cuts of [0,1]). Deterministic given seed.
MixtureLikelihood gen_synthetic_mixture(int dim, std::uint64_t seed,
                                        double domain_half_width = 1.0);

/// sum_k w_k N(x; mu_k, Sigma_k), accumulated with log-sum-exp.
double mixture_eval(const MixtureLikelihood& mix, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Z = sum_k w_k N(mu_k; nu, Sigma_k + Lambda), exact for a Gaussian prior.
double analytic_mixture_evidence(const MixtureLikelihood& mix, const GaussianPrior& prior);

/// The prior the mixture benchmarks integrate against: N(0, (h/5)^2 I), so the
/// box nu +- 5 sd spans the domain.
GaussianPrior mixture_prior(int dim, double domain_half_width = 1.0);

LikelihoodFn mixture_likelihood(const MixtureLikelihood& mix);

// ---------------------------------------------------------------------------
// GP-regression marginal-likelihood surface over log hyperparameters
// ---------------------------------------------------------------------------

struct RegressionEvidenceProblem {
    Eigen::MatrixXd inputs;    // M x d, standardized
    Eigen::VectorXd targets;   // M, standardized
    GaussianPrior hyperprior;  // over log hyperparameters, dim d + 2
    double log_floor = -1e8;   // returned when the factorization fails

    int data_dim() const { return static_cast<int>(inputs.cols()); }
    int hyper_dim() const { return data_dim() + 2; }
};

/// Load a CSV (comma-separated, '.' decimal, last column is the target),
/// standardize inputs and targets, and build the zero-mean log-space Gaussian
/// hyperprior with the given variance.
RegressionEvidenceProblem load_regression_problem(const std::string& path,
                                                  double hyperprior_variance = 4.0,
                                                  bool has_header = false);

RegressionEvidenceProblem make_regression_problem(Eigen::MatrixXd inputs, Eigen::VectorXd targets,
                                                  double hyperprior_variance = 4.0);

/// GP regression log marginal likelihood at log_hypers =
/// (log output scale, log input length-scales..., log noise variance), the noise
/// variance entering the kernel diagonal. Cholesky failure returns
/// problem.log_floor (and sets *floored when provided).
double regression_log_likelihood(const RegressionEvidenceProblem& problem,
                                 const Eigen::Ref<const Eigen::VectorXd>& log_hypers,
                                 bool* floored = nullptr);

/// Positive-likelihood view exp(logL - shift), clamped away from underflow so
/// the warp stays well-defined. The shift cancels in reported log-evidence:
/// log Z_original = log Z_shifted + shift.
class ShiftedRegressionLikelihood {
public:
    ShiftedRegressionLikelihood(RegressionEvidenceProblem problem, double log_shift);

    /// Shift taken as the max log marginal over the deterministic initial
    /// design of the hyperprior (its mean and the first axis point).
    static ShiftedRegressionLikelihood from_initial_design(RegressionEvidenceProblem problem);

    double operator()(const Eigen::Ref<const Eigen::VectorXd>& log_hypers) const;
    double log_shift() const { return shift_; }
    const RegressionEvidenceProblem& problem() const { return problem_; }
    LikelihoodFn as_likelihood() const;

private:
    RegressionEvidenceProblem problem_;
    double shift_;
};

// ---------------------------------------------------------------------------
// Conjugate toy
// ---------------------------------------------------------------------------

/// l(x) = N(x; 0, I) against pi = N(0, I): Z = (4 pi)^{-D/2}.
LikelihoodFn conjugate_gaussian_likelihood(int dim);
double conjugate_gaussian_log_evidence(int dim);

}  // namespace wsabi
