#include "wsabi/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "wsabi/quadrature.hpp"

namespace wsabi {

RunTrace run_smc(const LikelihoodFn& likelihood, const GaussianPrior& prior, const Budget& budget,
                 std::uint64_t seed) {
    prior.validate();
    RunTrace trace;
    trace.method = "smc";
    trace.seed = seed;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    const Eigen::VectorXd sd = prior.stddev();
    const Stopwatch clock(likelihood);

    double sum = 0.0, sumsq = 0.0;
    long long n = 0;
    long long next_record = 1;
    Eigen::VectorXd x(prior.dim());

    auto record = [&] {
        const double mean = sum / n;
        const double var =
            n > 1 ? std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0)) / n : 0.0;
        trace.records.push_back({n, clock.seconds(), mean, var});
    };

    try {
        while (n < budget.max_samples && clock.seconds() < budget.max_seconds) {
            for (int i = 0; i < prior.dim(); ++i) x(i) = prior.mean(i) + sd(i) * n01(rng);
            const double v = likelihood(x);
            if (!std::isfinite(v)) throw InvalidLikelihoodError("run_smc: non-finite likelihood");
            sum += v;
            sumsq += v * v;
            ++n;
            if (n == next_record) {
                record();
                next_record *= 2;
            }
        }
    } catch (const std::exception& e) {
        trace.error = true;
        trace.message = e.what();
        return trace;
    }
    if (n > 0 && (trace.records.empty() || trace.records.back().n_samples != n)) record();
    return trace;
}

// ---------------------------------------------------------------------------
// AIS
// ---------------------------------------------------------------------------

void AisConfig::validate() const {
    if (n_temperatures < 2) throw std::invalid_argument("AisConfig: n_temperatures must be >= 2");
    if (n_mh_steps_per_temperature < 1)
        throw std::invalid_argument("AisConfig: n_mh_steps_per_temperature must be >= 1");
    if (!(proposal_scale > 0.0)) throw std::invalid_argument("AisConfig: proposal_scale must be > 0");
    if (n_chains < 1) throw std::invalid_argument("AisConfig: n_chains must be >= 1");
}

std::vector<double> ais_temperature_ladder(const AisConfig& config) {
    config.validate();
    const int t = config.n_temperatures;
    std::vector<double> betas(t);
    if (config.schedule == AisConfig::Schedule::Linear) {
        for (int i = 0; i < t; ++i) betas[i] = static_cast<double>(i) / (t - 1);
    } else {
        // (1 - beta) falls geometrically from 1 toward eps; the endpoint is
        // snapped to beta = 1 exactly.
        const double eps = 1e-4;
        const double r = std::pow(eps, 1.0 / (t - 1));
        for (int i = 0; i < t; ++i) betas[i] = 1.0 - std::pow(r, i);
        betas[t - 1] = 1.0;
    }
    betas[0] = 0.0;
    return betas;
}

bool mh_step(Eigen::VectorXd& x, double& log_lik, double beta, const LikelihoodFn& likelihood,
             const GaussianPrior& prior, const Eigen::VectorXd& step_scale, std::mt19937_64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Eigen::VectorXd prop(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) prop(i) = x(i) + step_scale(i) * n01(rng);
    const double lik_prop = likelihood(prop);
    if (!(lik_prop > 0.0) || !std::isfinite(lik_prop))
        throw InvalidLikelihoodError("mh_step: non-positive or non-finite likelihood");
    const double log_lik_prop = std::log(lik_prop);
    const double log_accept = beta * (log_lik_prop - log_lik) + prior.log_density(prop) -
                              prior.log_density(x);
    if (std::log(u01(rng)) < log_accept) {
        x = std::move(prop);
        log_lik = log_lik_prop;
        return true;
    }
    return false;
}

RunTrace run_ais(const LikelihoodFn& likelihood, const GaussianPrior& prior,
                 const AisConfig& config, const Budget& budget) {
    prior.validate();
    config.validate();
    RunTrace trace;
    trace.method = "ais";
    trace.seed = config.seed;

    const std::vector<double> betas = ais_temperature_ladder(config);
    const Eigen::VectorXd sd = prior.stddev();
    const Stopwatch clock(likelihood);
    const long long evals_per_chain =
        1 + static_cast<long long>(betas.size() - 1) * config.n_mh_steps_per_temperature;

    std::vector<double> log_weights;
    std::normal_distribution<double> n01(0.0, 1.0);

    auto record = [&] {
        const double m = *std::max_element(log_weights.begin(), log_weights.end());
        double s = 0.0;
        for (double lw : log_weights) s += std::exp(lw - m);
        const long long k = static_cast<long long>(log_weights.size());
        const double mean_w = s / k;
        double varw = 0.0;
        for (double lw : log_weights) {
            const double d = std::exp(lw - m) - mean_w;
            varw += d * d;
        }
        varw = k > 1 ? varw / (k - 1.0) : 0.0;
        const double scale = std::exp(m);
        trace.records.push_back({likelihood.evaluations(), clock.seconds(), scale * mean_w,
                                 scale * scale * varw / k});
    };

    try {
        for (int c = 0; c < config.n_chains; ++c) {
            if (likelihood.evaluations() + evals_per_chain > budget.max_samples) break;
            if (clock.seconds() >= budget.max_seconds) break;

            std::mt19937_64 rng(mix_seed(config.seed, static_cast<std::uint64_t>(c)));
            Eigen::VectorXd x(prior.dim());
            for (int i = 0; i < prior.dim(); ++i) x(i) = prior.mean(i) + sd(i) * n01(rng);
            double lik0 = likelihood(x);
            if (!(lik0 > 0.0) || !std::isfinite(lik0))
                throw InvalidLikelihoodError("run_ais: non-positive or non-finite likelihood");
            double log_lik = std::log(lik0);

            double log_w = 0.0;
            bool any_accept = false;
            bool aborted_mid_chain = false;
            for (std::size_t t = 1; t < betas.size(); ++t) {
                log_w += (betas[t] - betas[t - 1]) * log_lik;
                // proposal scale annealed linearly from 1.0 at beta=0 down to
                // proposal_scale at beta=1
                const double frac = 1.0 + (config.proposal_scale - 1.0) * betas[t];
                const Eigen::VectorXd step = frac * sd;
                for (int s = 0; s < config.n_mh_steps_per_temperature; ++s)
                    any_accept |= mh_step(x, log_lik, betas[t], likelihood, prior, step, rng);
                if (clock.seconds() >= budget.max_seconds) {
                    aborted_mid_chain = t + 1 < betas.size();
                    if (aborted_mid_chain) break;
                }
            }
            if (aborted_mid_chain) break;  // discard the incomplete chain
            if (!any_accept) trace.warning = true;
            log_weights.push_back(log_w);
            record();
        }
    } catch (const std::exception& e) {
        trace.error = true;
        trace.message = e.what();
    }
    return trace;
}

// ---------------------------------------------------------------------------
// BMC
// ---------------------------------------------------------------------------

RunTrace run_bmc(const LikelihoodFn& likelihood, const GaussianPrior& prior, const Budget& budget,
                 std::uint64_t seed) {
    prior.validate();
    RunTrace trace;
    trace.method = "bmc";
    trace.seed = seed;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    const Eigen::VectorXd sd = prior.stddev();
    const Stopwatch clock(likelihood);

    const int dim = prior.dim();
    Eigen::MatrixXd locations(0, dim);
    Eigen::VectorXd values(0);
    KernelParams params;
    params.output_scale = 1.0;
    params.length_scales = sd;
    HyperBounds bounds = HyperBounds::from_prior_scales(sd, 1.0);

    try {
        while (static_cast<long long>(values.size()) < budget.max_samples &&
               clock.seconds() < budget.max_seconds) {
            Eigen::VectorXd x(dim);
            for (int i = 0; i < dim; ++i) x(i) = prior.mean(i) + sd(i) * n01(rng);
            const double v = likelihood(x);
            if (!std::isfinite(v))
                throw InvalidLikelihoodError("run_bmc: non-finite likelihood");
            const int n = static_cast<int>(values.size()) + 1;
            locations.conservativeResize(n, dim);
            locations.row(n - 1) = x.transpose();
            values.conservativeResize(n);
            values(n - 1) = v;

            Dataset data(locations, values);
            if (n <= 25 || n % 5 == 0) {
                const double vs = std::max(values.cwiseAbs().maxCoeff(), 1e-12);
                bounds.output_scale_min = 1e-6 * vs;
                bounds.output_scale_max = 1e6 * vs;
                const HyperFit fit = optimize_hyperparams(
                    data, params, 2, mix_seed(seed, static_cast<std::uint64_t>(n)), bounds);
                params = fit.params;
            }
            const EvidenceEstimate est = evidence_bmc(data, params, prior);
            trace.records.push_back({static_cast<long long>(n), clock.seconds(), est.mean,
                                     est.variance});
        }
    } catch (const std::exception& e) {
        trace.error = true;
        trace.message = e.what();
    }
    return trace;
}

}  // namespace wsabi
