#pragma once

#include <random>

#include "wsabi/gp.hpp"
#include "wsabi/run.hpp"
#include "wsabi/types.hpp"

namespace wsabi {

/// Simple Monte Carlo: x_i ~ pi i.i.d., Z_n = mean of l(x_i). Trace records on a
/// power-of-two sample schedule plus the final count.
RunTrace run_smc(const LikelihoodFn& likelihood, const GaussianPrior& prior, const Budget& budget,
                 std::uint64_t seed);

struct AisConfig {
    int n_temperatures = 50;
    int n_mh_steps_per_temperature = 5;
    double proposal_scale = 0.5;  // MH step at beta=1, as a fraction of prior sd
    enum class Schedule { Geometric, Linear };
    Schedule schedule = Schedule::Geometric;
    int n_chains = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

/// The inverse-temperature ladder: strictly increasing from 0 to 1. Geometric
/// spacing is in (1 - beta).
std::vector<double> ais_temperature_ladder(const AisConfig& config);

/// One random-walk Metropolis step targeting pi(x) l(x)^beta with an isotropic
/// Gaussian proposal of per-coordinate scale step_scale. Returns whether the
/// proposal was accepted; x and log_lik are updated in place.
bool mh_step(Eigen::VectorXd& x, double& log_lik, double beta, const LikelihoodFn& likelihood,
             const GaussianPrior& prior, const Eigen::VectorXd& step_scale, std::mt19937_64& rng);

/// Annealed importance sampling with a Metropolis-Hastings kernel. Chains are
/// independent; log-weights accumulate sum_t (beta_{t+1}-beta_t) log l(x_t) and
/// the evidence estimate is combined across chains via log-sum-exp. Trace
/// records after each completed chain.
RunTrace run_ais(const LikelihoodFn& likelihood, const GaussianPrior& prior,
                 const AisConfig& config, const Budget& budget);

/// Bayesian Monte Carlo baseline: prior-random designs, GP fitted directly on
/// the raw likelihood with ML-II refits on the active-sampler schedule.
RunTrace run_bmc(const LikelihoodFn& likelihood, const GaussianPrior& prior, const Budget& budget,
                 std::uint64_t seed);

}  // namespace wsabi
