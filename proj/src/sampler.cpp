#include "wsabi/sampler.hpp"

#include <cmath>
#include <cstdlib>

namespace wsabi {

bool reference_mode() {
    const char* v = std::getenv("WSABI_REFERENCE_MODE");
    return v != nullptr && std::string(v) == "1";
}

namespace {

// Prior mean, then axis points nu + sqrt(Lambda_i) e_i in coordinate order
// (alternating sign), until at least two points exist.
std::vector<Eigen::VectorXd> initial_design(const GaussianPrior& prior) {
    std::vector<Eigen::VectorXd> pts;
    pts.push_back(prior.mean);
    const Eigen::VectorXd sd = prior.stddev();
    double sign = 1.0;
    for (int i = 0; i < prior.dim() && pts.size() < 2; ++i) {
        Eigen::VectorXd p = prior.mean;
        p(i) += sign * sd(i);
        pts.push_back(p);
        sign = -sign;
    }
    return pts;
}

}  // namespace

RunTrace run_wsabi(const LikelihoodFn& likelihood, const GaussianPrior& prior,
                   WarpFlavour flavour, const Budget& budget, const WsabiConfig& config) {
    return run_wsabi(likelihood, prior, flavour, budget, config, nullptr);
}

RunTrace run_wsabi(const LikelihoodFn& likelihood, const GaussianPrior& prior,
                   WarpFlavour flavour, const Budget& budget, const WsabiConfig& config,
                   WsabiState* final_state) {
    prior.validate();
    config.acquisition.validate(prior.dim());
    if (likelihood.dim() != prior.dim())
        throw std::invalid_argument("run_wsabi: likelihood/prior dimension mismatch");

    RunTrace trace;
    trace.method = flavour_name(flavour);
    trace.seed = config.acquisition.seed;

    const int dim = prior.dim();
    const Eigen::VectorXd sd = prior.stddev();
    Eigen::MatrixXd locations(0, dim);
    Eigen::VectorXd raws(0);

    KernelParams params;
    params.output_scale = 1.0;
    params.length_scales = sd;  // prior-aware default before the first ML-II fit
    if (config.fixed_params) params = *config.fixed_params;

    const HyperBounds bounds = HyperBounds::from_prior_scales(sd, 1.0);
    WarpedModel model;
    const Stopwatch clock(likelihood);

    auto refit_due = [&](int n) { return n <= 25 || n % 5 == 0; };

    // Evaluate at x, update the model, append a trace record. Returns false on abort.
    auto absorb = [&](const Eigen::VectorXd& x) {
        const double raw = likelihood(x);
        const int n = static_cast<int>(raws.size()) + 1;
        locations.conservativeResize(n, dim);
        locations.row(n - 1) = x.transpose();
        raws.conservativeResize(n);
        raws(n - 1) = raw;

        const WarpResult warp = warp_observations(raws);
        Dataset data(locations, warp.warped);
        if (!config.fixed_params && refit_due(n)) {
            HyperBounds b = bounds;
            // rescale lambda bounds with the data
            const double vs = std::max(warp.warped.cwiseAbs().maxCoeff(), 1e-12);
            b.output_scale_min = 1e-6 * vs;
            b.output_scale_max = 1e6 * vs;
            const HyperFit fit = optimize_hyperparams(
                data, params, config.hyper_restarts,
                mix_seed(config.acquisition.seed, static_cast<std::uint64_t>(n)), b);
            params = fit.params;
        }
        model.gp = GpPosterior::fit(data, params);
        model.alpha = warp.alpha;
        model.flavour = flavour;

        const EvidenceEstimate est = flavour == WarpFlavour::Linearised
                                         ? evidence_wsabi_l(model, prior)
                                         : evidence_wsabi_m(model, prior);
        trace.records.push_back({static_cast<long long>(n), clock.seconds(), est.mean,
                                 est.variance});
    };

    auto too_close = [&](const Eigen::VectorXd& x) {
        for (Eigen::Index i = 0; i < locations.rows(); ++i) {
            bool close = true;
            for (int d = 0; d < dim; ++d)
                if (std::abs(locations(i, d) - x(d)) > config.duplicate_guard * sd(d)) {
                    close = false;
                    break;
                }
            if (close) return true;
        }
        return false;
    };

    try {
        for (const Eigen::VectorXd& p : initial_design(prior)) absorb(p);

        while (static_cast<long long>(raws.size()) < budget.max_samples &&
               clock.seconds() < budget.max_seconds) {
            AcquisitionConfig acq_cfg = config.acquisition;
            acq_cfg.seed = mix_seed(config.acquisition.seed,
                                    0x5151ULL + static_cast<std::uint64_t>(raws.size()));
            const auto acq = [&](const Eigen::VectorXd& x) {
                return flavour == WarpFlavour::Linearised ? acquisition_l(model, prior, x)
                                                          : acquisition_m(model, prior, x);
            };
            const AcquisitionMax amax = maximize_acquisition(acq, prior, acq_cfg);

            Eigen::VectorXd next = amax.best;
            bool found = !too_close(next);
            for (std::size_t k = 1; !found && k < amax.ranked.size(); ++k) {
                next = amax.ranked[k];
                found = !too_close(next);
            }
            for (int attempt = 1; !found && attempt <= 64; ++attempt) {
                // deterministic nudge away from the duplicate
                next = amax.best;
                next(0) += attempt * 16.0 * config.duplicate_guard * sd(0);
                found = !too_close(next);
            }
            if (!found) {
                trace.error = true;
                trace.message = "acquisition collapsed onto existing samples";
                break;
            }
            absorb(next);
        }
    } catch (const std::exception& e) {
        trace.error = true;
        trace.message = e.what();
    }

    if (final_state && raws.size() > 0) {
        final_state->locations = locations;
        final_state->raw_values = raws;
        final_state->params = params;
        final_state->model = model;
    }
    return trace;
}

}  // namespace wsabi
