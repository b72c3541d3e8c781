#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wsabi/gp.hpp"
#include "wsabi/types.hpp"

namespace wsabi {

enum class WarpFlavour { Linearised, MomentMatched };

inline const char* flavour_name(WarpFlavour f) {
    return f == WarpFlavour::Linearised ? "wsabi-l" : "wsabi-m";
}

struct WarpResult {
    double alpha;             // 0.8 * min(raw)
    Eigen::VectorXd warped;   // sqrt(2 (raw - alpha))
};

/// Square-root warp of strictly positive likelihood observations. The inverse
/// map is raw = alpha + 1/2 warped^2.
WarpResult warp_observations(const Eigen::Ref<const Eigen::VectorXd>& raw_values);

/// GP over the warped likelihood plus the offset and the approximation flavour.
struct WarpedModel {
    GpPosterior gp;   // over sqrt(2 (l - alpha))
    double alpha = 0.0;
    WarpFlavour flavour = WarpFlavour::Linearised;
};

struct MeanCov {
    double mean;  // approximate posterior mean of l at x
    double cov;   // approximate posterior covariance of l between x and y
};

/// Linearised approximation:
///   m^L(x)    = alpha + 1/2 mt(x)^2
///   C^L(x,y)  = mt(x) Ct(x,y) mt(y)
MeanCov wsabi_l_mean_cov(const WarpedModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y);

/// Moment-matched approximation:
///   m^M(x)    = alpha + 1/2 (mt(x)^2 + Ct(x,x))
///   C^M(x,y)  = 1/2 Ct(x,y)^2 + mt(x) Ct(x,y) mt(y)
MeanCov wsabi_m_mean_cov(const WarpedModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y);

/// Empirical moments of l on a grid, obtained by sampling the exact warped
/// posterior (joint Gaussian on the grid) and pushing each draw through
/// alpha + 1/2 lt^2. Test oracle for the two approximations above.
struct Chi2Reference {
    Eigen::VectorXd mean;            // per-point empirical mean of l
    Eigen::VectorXd variance;        // per-point empirical variance of l
    Eigen::VectorXd fourth_central;  // per-point empirical 4th central moment
    long long n_draws = 0;
};

Chi2Reference chi2_mc_reference(const WarpedModel& model,
                                const std::vector<Eigen::VectorXd>& x_grid, long long n_draws,
                                std::uint64_t seed);

}  // namespace wsabi
