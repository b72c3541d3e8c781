#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "wsabi/types.hpp"

namespace wsabi {

/// Brute-force integration against a Gaussian prior, used by tests as an
/// independent check on the closed forms.
struct OracleConfig {
    int grid_points_per_dim = 201;  // >= 101 for the grid rule
    double box_sigmas = 8.0;        // half-width of the integration box in prior sd
    long long mc_samples = 200000;  // >= 1e5 for D >= 3
    std::uint64_t seed = 0;
};

/// Trapezoidal tensor-grid quadrature of f(x) pi(x) over nu +- box_sigmas*sqrt(Lambda).
/// Supports D <= 2 only.
double grid_integral(const std::function<double(const Eigen::VectorXd&)>& f,
                     const GaussianPrior& prior, const OracleConfig& cfg);

struct McEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Plain Monte Carlo with i.i.d. prior draws; deterministic per seed.
McEstimate mc_integral(const std::function<double(const Eigen::VectorXd&)>& f,
                       const GaussianPrior& prior, const OracleConfig& cfg);

}  // namespace wsabi
