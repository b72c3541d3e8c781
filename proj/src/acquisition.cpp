#include "wsabi/acquisition.hpp"

#include <cmath>

#include "wsabi/cmaes.hpp"

namespace wsabi {

void AcquisitionConfig::validate(int dim) const {
    const int pop = optimizer_population > 0 ? optimizer_population : default_cmaes_population(dim);
    if (pop < 4) throw std::invalid_argument("AcquisitionConfig: population must be >= 4");
    if (optimizer_generations < 10)
        throw std::invalid_argument("AcquisitionConfig: generations must be >= 10");
    if (search_box_sigmas < 2.0 || search_box_sigmas > 10.0)
        throw std::invalid_argument("AcquisitionConfig: search_box_sigmas must be in [2, 10]");
}

double acquisition_l(const WarpedModel& model, const GaussianPrior& prior,
                     const Eigen::Ref<const Eigen::VectorXd>& x) {
    const double mt = model.gp.mean(x);
    const double ct = model.gp.var(x);
    return std::exp(2.0 * prior.log_density(x)) * ct * mt * mt;
}

double acquisition_m(const WarpedModel& model, const GaussianPrior& prior,
                     const Eigen::Ref<const Eigen::VectorXd>& x) {
    const double mt = model.gp.mean(x);
    const double ct = model.gp.var(x);
    return std::exp(2.0 * prior.log_density(x)) * ct * (0.5 * ct + mt * mt);
}

AcquisitionMax maximize_acquisition(const std::function<double(const Eigen::VectorXd&)>& acq,
                                    const GaussianPrior& prior, const AcquisitionConfig& config) {
    prior.validate();
    config.validate(prior.dim());
    const Eigen::VectorXd sd = prior.stddev();
    const Eigen::VectorXd lower = prior.mean - config.search_box_sigmas * sd;
    const Eigen::VectorXd upper = prior.mean + config.search_box_sigmas * sd;

    CmaesOptions opts;
    opts.population = config.optimizer_population;
    opts.max_generations = config.optimizer_generations;
    opts.seed = config.seed;

    const CmaesResult res =
        cmaes_minimize([&](const Eigen::VectorXd& x) { return -acq(x); }, lower, upper, opts);
    if (!res.any_finite)
        throw DegenerateAcquisitionError("maximize_acquisition: non-finite utility everywhere");

    AcquisitionMax out;
    out.best = res.best_x;
    out.value = -res.best_f;
    out.ranked.reserve(res.ranked.size());
    for (const auto& [f, x] : res.ranked) out.ranked.push_back(x);
    return out;
}

}  // namespace wsabi
