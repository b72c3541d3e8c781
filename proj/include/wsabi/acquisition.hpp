#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "wsabi/types.hpp"
#include "wsabi/warp.hpp"

namespace wsabi {

struct AcquisitionConfig {
    int optimizer_population = 0;    // 0 selects 4 + floor(3 ln D)
    int optimizer_generations = 50;
    double search_box_sigmas = 5.0;  // half-width of the search box in prior sd
    std::uint64_t seed = 0;

    void validate(int dim) const;
};

/// Uncertainty-sampling utility under the linearised model:
/// pi(x)^2 Ct(x,x) mt(x)^2. The pi^2 factor is accumulated in log space and
/// exponentiated once.
double acquisition_l(const WarpedModel& model, const GaussianPrior& prior,
                     const Eigen::Ref<const Eigen::VectorXd>& x);

/// Moment-matched utility: pi(x)^2 Ct(x,x) (1/2 Ct(x,x) + mt(x)^2).
double acquisition_m(const WarpedModel& model, const GaussianPrior& prior,
                     const Eigen::Ref<const Eigen::VectorXd>& x);

struct AcquisitionMax {
    Eigen::VectorXd best;
    double value = 0.0;
    /// Distinct candidates in descending utility (best first); used for the
    /// runner-up rule when the best point duplicates an existing sample.
    std::vector<Eigen::VectorXd> ranked;
};

/// Global maximization of an acquisition surface over nu +- search_box_sigmas*sd
/// by the evolutionary strategy plus one polish step. Deterministic given seed.
/// Throws DegenerateAcquisitionError when the surface is non-finite everywhere.
AcquisitionMax maximize_acquisition(const std::function<double(const Eigen::VectorXd&)>& acq,
                                    const GaussianPrior& prior, const AcquisitionConfig& config);

}  // namespace wsabi
