#include "wsabi/oracle.hpp"

#include <cmath>
#include <random>

namespace wsabi {

double grid_integral(const std::function<double(const Eigen::VectorXd&)>& f,
                     const GaussianPrior& prior, const OracleConfig& cfg) {
    prior.validate();
    const int d = prior.dim();
    if (d > 2) throw std::invalid_argument("grid_integral: only D <= 2 supported");
    if (cfg.grid_points_per_dim < 101)
        throw std::invalid_argument("grid_integral: grid_points_per_dim must be >= 101");
    const int n = cfg.grid_points_per_dim;
    const Eigen::VectorXd sd = prior.stddev();

    auto axis = [&](int i) {
        const double lo = prior.mean(i) - cfg.box_sigmas * sd(i);
        const double hi = prior.mean(i) + cfg.box_sigmas * sd(i);
        Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(n, lo, hi);
        return std::pair<Eigen::VectorXd, double>(pts, (hi - lo) / (n - 1));
    };

    if (d == 1) {
        auto [pts, h] = axis(0);
        double acc = 0.0;
        Eigen::VectorXd x(1);
        for (int i = 0; i < n; ++i) {
            x(0) = pts(i);
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += w * f(x) * prior.density(x);
        }
        return acc * h;
    }

    auto [px, hx] = axis(0);
    auto [py, hy] = axis(1);
    double acc = 0.0;
    Eigen::VectorXd x(2);
    for (int i = 0; i < n; ++i) {
        const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        x(0) = px(i);
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            x(1) = py(j);
            row += wj * f(x) * prior.density(x);
        }
        acc += wi * row;
    }
    return acc * hx * hy;
}

McEstimate mc_integral(const std::function<double(const Eigen::VectorXd&)>& f,
                       const GaussianPrior& prior, const OracleConfig& cfg) {
    prior.validate();
    if (cfg.mc_samples < 1) throw std::invalid_argument("mc_integral: need at least one sample");
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    const Eigen::VectorXd sd = prior.stddev();
    const int d = prior.dim();

    double sum = 0.0, sumsq = 0.0;
    Eigen::VectorXd x(d);
    for (long long k = 0; k < cfg.mc_samples; ++k) {
        for (int i = 0; i < d; ++i) x(i) = prior.mean(i) + sd(i) * n01(rng);
        const double v = f(x);
        sum += v;
        sumsq += v * v;
    }
    const double n = static_cast<double>(cfg.mc_samples);
    McEstimate out;
    out.mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * out.mean * out.mean) / (n - 1.0));
    out.standard_error = cfg.mc_samples > 1 ? std::sqrt(var / n) : 0.0;
    return out;
}

}  // namespace wsabi
