#pragma once

#include <optional>

#include "wsabi/acquisition.hpp"
#include "wsabi/gp.hpp"
#include "wsabi/quadrature.hpp"
#include "wsabi/run.hpp"
#include "wsabi/warp.hpp"

namespace wsabi {

struct WsabiConfig {
    AcquisitionConfig acquisition;
    int hyper_restarts = 2;
    /// When set, ML-II is skipped and these parameters are used throughout.
    std::optional<KernelParams> fixed_params;
    /// Minimum per-coordinate distance to an existing sample, in units of
    /// prior sd. Violations fall back to the optimizer's runner-up.
    double duplicate_guard = 1e-8;
};

/// Sequential warped Bayesian quadrature: evaluate, re-warp with the updated
/// offset, refit hyperparameters on schedule (every sample for n <= 25, then
/// every 5th), refit the posterior, record the evidence estimate, then place
/// the next sample at the acquisition maximum. The initial design is the prior
/// mean plus axis points nu + sqrt(Lambda_i) e_i drawn in fixed order until two
/// points exist; it is always completed even under a smaller sample budget.
RunTrace run_wsabi(const LikelihoodFn& likelihood, const GaussianPrior& prior,
                   WarpFlavour flavour, const Budget& budget, const WsabiConfig& config);

/// The model state run_wsabi maintains; exposed for tests and for callers that
/// want the final surrogate rather than just the trace.
struct WsabiState {
    Eigen::MatrixXd locations;   // n x D
    Eigen::VectorXd raw_values;  // source of truth; warped values are derived
    KernelParams params;
    WarpedModel model;
};

RunTrace run_wsabi(const LikelihoodFn& likelihood, const GaussianPrior& prior,
                   WarpFlavour flavour, const Budget& budget, const WsabiConfig& config,
                   WsabiState* final_state);

}  // namespace wsabi
