#include "wsabi/warp.hpp"

#include <cmath>
#include <random>

namespace wsabi {

WarpResult warp_observations(const Eigen::Ref<const Eigen::VectorXd>& raw_values) {
    if (raw_values.size() < 1)
        throw std::invalid_argument("warp_observations: empty observation vector");
    for (Eigen::Index i = 0; i < raw_values.size(); ++i)
        if (!(raw_values(i) > 0.0) || !std::isfinite(raw_values(i)))
            throw InvalidLikelihoodError("warp_observations: observations must be positive finite");
    WarpResult out;
    out.alpha = 0.8 * raw_values.minCoeff();
    out.warped = (2.0 * (raw_values.array() - out.alpha)).sqrt();
    return out;
}

MeanCov wsabi_l_mean_cov(const WarpedModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (model.flavour != WarpFlavour::Linearised)
        throw std::invalid_argument("wsabi_l_mean_cov: model flavour is not Linearised");
    const double mx = model.gp.mean(x);
    const double my = model.gp.mean(y);
    const double cxy = model.gp.cov(x, y);
    return {model.alpha + 0.5 * mx * mx, mx * cxy * my};
}

MeanCov wsabi_m_mean_cov(const WarpedModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (model.flavour != WarpFlavour::MomentMatched)
        throw std::invalid_argument("wsabi_m_mean_cov: model flavour is not MomentMatched");
    const double mx = model.gp.mean(x);
    const double my = model.gp.mean(y);
    const double cxy = model.gp.cov(x, y);
    const double cxx = model.gp.var(x);
    MeanCov out;
    out.mean = model.alpha + 0.5 * (mx * mx + cxx);
    out.cov = 0.5 * cxy * cxy + mx * cxy * my;
    if ((&x == &y || x == y) && out.cov < 0.0) out.cov = 0.0;
    return out;
}

Chi2Reference chi2_mc_reference(const WarpedModel& model,
                                const std::vector<Eigen::VectorXd>& x_grid, long long n_draws,
                                std::uint64_t seed) {
    if (n_draws < 1000) throw std::invalid_argument("chi2_mc_reference: n_draws must be >= 1000");
    const int m = static_cast<int>(x_grid.size());
    if (m < 1) throw std::invalid_argument("chi2_mc_reference: empty grid");

    Eigen::VectorXd mt(m);
    Eigen::MatrixXd Ct(m, m);
    for (int i = 0; i < m; ++i) {
        mt(i) = model.gp.mean(x_grid[i]);
        for (int j = 0; j <= i; ++j) {
            const double c = model.gp.cov(x_grid[i], x_grid[j]);
            Ct(i, j) = c;
            Ct(j, i) = c;
        }
    }

    // Factor the grid covariance, escalating jitter relative to lambda^2.
    const double sf2 = model.gp.params().output_scale * model.gp.params().output_scale;
    double jitter = kBaseJitterScale * sf2;
    Eigen::MatrixXd L;
    for (;;) {
        Eigen::LLT<Eigen::MatrixXd> llt(Ct + jitter * Eigen::MatrixXd::Identity(m, m));
        if (llt.info() == Eigen::Success) {
            L = llt.matrixL();
            break;
        }
        if (jitter >= kMaxJitterScale * sf2)
            throw IllConditionedError("chi2_mc_reference: grid covariance not factorizable",
                                      jitter);
        jitter *= 10.0;
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);

    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(m);  // sum l
    Eigen::VectorXd s2 = Eigen::VectorXd::Zero(m);  // sum l^2
    Eigen::VectorXd s3 = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd s4 = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd zeta(m), lt(m);
    for (long long k = 0; k < n_draws; ++k) {
        for (int i = 0; i < m; ++i) zeta(i) = n01(rng);
        lt = mt + L.triangularView<Eigen::Lower>() * zeta;
        const Eigen::ArrayXd l = model.alpha + 0.5 * lt.array().square();
        s1 += l.matrix();
        s2 += l.square().matrix();
        s3 += l.cube().matrix();
        s4 += l.square().square().matrix();
    }

    const double n = static_cast<double>(n_draws);
    Chi2Reference out;
    out.n_draws = n_draws;
    out.mean = s1 / n;
    const Eigen::ArrayXd m1 = out.mean.array();
    const Eigen::ArrayXd m2 = s2.array() / n;
    const Eigen::ArrayXd m3 = s3.array() / n;
    const Eigen::ArrayXd m4 = s4.array() / n;
    out.variance = ((m2 - m1.square()) * (n / (n - 1.0))).max(0.0).matrix();
    // central 4th moment from raw moments
    out.fourth_central =
        (m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1.square() - 3.0 * m1.square().square()).max(0.0).matrix();
    return out;
}

}  // namespace wsabi
