#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace wsabi {

/// Covariance-adapting evolutionary strategy (CMA-ES style) for box-bounded
/// minimization, followed by one coordinate-wise parabolic polish pass.
/// Deterministic for a fixed seed.
struct CmaesOptions {
    int population = 0;       // <= 0 selects 4 + floor(3 ln D)
    int max_generations = 60;
    double initial_step = 0.3;  // in normalized box coordinates ([-1,1] per axis)
    std::uint64_t seed = 0;
    double tol_fun = 1e-12;
};

struct CmaesResult {
    Eigen::VectorXd best_x;
    double best_f = 0.0;
    /// Best distinct candidates seen, ascending in f (best first).
    std::vector<std::pair<double, Eigen::VectorXd>> ranked;
    long long evaluations = 0;
    bool any_finite = false;  // false when every evaluation was non-finite
};

int default_cmaes_population(int dim);

CmaesResult cmaes_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                           const CmaesOptions& opts);

}  // namespace wsabi
