#include "wsabi/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace wsabi {

namespace {

// Fold a normalized coordinate into [-1,1] by reflection at the walls.
double fold(double t) {
    double s = std::fmod(t + 1.0, 4.0);
    if (s < 0.0) s += 4.0;
    return s <= 2.0 ? s - 1.0 : 3.0 - s;
}

struct Archive {
    // distinct candidates, ascending f
    std::vector<std::pair<double, Eigen::VectorXd>> entries;
    static constexpr std::size_t kCap = 8;

    void offer(double f, const Eigen::VectorXd& x) {
        if (!std::isfinite(f)) return;
        for (auto& e : entries) {
            if ((e.second - x).lpNorm<Eigen::Infinity>() < 2e-6) {
                if (f < e.first) {
                    e.first = f;
                    e.second = x;
                    std::sort(entries.begin(), entries.end(),
                              [](const auto& a, const auto& b) { return a.first < b.first; });
                }
                return;
            }
        }
        entries.emplace_back(f, x);
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (entries.size() > kCap) entries.resize(kCap);
    }
};

}  // namespace

int default_cmaes_population(int dim) {
    return 4 + static_cast<int>(std::floor(3.0 * std::log(std::max(dim, 1))));
}

CmaesResult cmaes_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                           const CmaesOptions& opts) {
    const int n = static_cast<int>(lower.size());
    if (n < 1 || upper.size() != n) throw std::invalid_argument("cmaes_minimize: bad box");
    for (int i = 0; i < n; ++i)
        if (!(upper(i) > lower(i))) throw std::invalid_argument("cmaes_minimize: empty box");

    const Eigen::VectorXd center = 0.5 * (lower + upper);
    const Eigen::VectorXd halfw = 0.5 * (upper - lower);
    auto denorm = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = center(i) + halfw(i) * fold(u(i));
        return x;
    };

    CmaesResult res;
    Archive archive;
    auto eval = [&](const Eigen::VectorXd& u) {
        const Eigen::VectorXd x = denorm(u);
        double v = f(x);
        ++res.evaluations;
        if (std::isfinite(v)) {
            res.any_finite = true;
            archive.offer(v, x);
        } else {
            v = std::numeric_limits<double>::infinity();
        }
        return v;
    };

    const int lambda = opts.population > 0 ? opts.population : default_cmaes_population(n);
    const int mu = std::max(1, lambda / 2);
    Eigen::VectorXd w(mu);
    for (int i = 0; i < mu; ++i) w(i) = std::log(0.5 * (lambda + 1.0)) - std::log(i + 1.0);
    w /= w.sum();
    const double mu_eff = 1.0 / w.squaredNorm();

    const double c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
    const double d_sigma =
        1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) + c_sigma;
    const double c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
    const double c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff);
    const double c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                                ((n + 2.0) * (n + 2.0) + mu_eff));
    const double chi_n = std::sqrt(static_cast<double>(n)) *
                         (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> n01(0.0, 1.0);

    Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
    double sigma = opts.initial_step;
    Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd p_sigma = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd p_c = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::VectorXd> ys(lambda);
    std::vector<std::pair<double, int>> fitness(lambda);

    // keep the box center as a candidate
    eval(m);

    for (int gen = 0; gen < opts.max_generations; ++gen) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
        if (eig.info() != Eigen::Success) break;
        const Eigen::VectorXd d_sqrt = eig.eigenvalues().cwiseMax(1e-20).cwiseSqrt();
        const Eigen::MatrixXd& B = eig.eigenvectors();

        for (int k = 0; k < lambda; ++k) {
            Eigen::VectorXd z(n);
            for (int i = 0; i < n; ++i) z(i) = n01(rng);
            ys[k] = B * (d_sqrt.asDiagonal() * z);
            fitness[k] = {eval(m + sigma * ys[k]), k};
        }
        if (gen == 0 && !res.any_finite) break;  // degenerate surface

        std::stable_sort(fitness.begin(), fitness.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

        Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < mu; ++i) y_w += w(i) * ys[fitness[i].second];
        m += sigma * y_w;

        // C^{-1/2} y_w
        const Eigen::VectorXd cinv_y = B * (d_sqrt.cwiseInverse().asDiagonal() * (B.transpose() * y_w));
        p_sigma = (1.0 - c_sigma) * p_sigma +
                  std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * cinv_y;
        const double ps_norm = p_sigma.norm();
        const double h_denom = std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * (gen + 1)));
        const bool h_sigma = ps_norm / h_denom < (1.4 + 2.0 / (n + 1.0)) * chi_n;

        p_c = (1.0 - c_c) * p_c;
        if (h_sigma) p_c += std::sqrt(c_c * (2.0 - c_c) * mu_eff) * y_w;

        Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < mu; ++i) {
            const Eigen::VectorXd& y = ys[fitness[i].second];
            rank_mu += w(i) * (y * y.transpose());
        }
        const double delta_h = h_sigma ? 0.0 : c_c * (2.0 - c_c);
        C = (1.0 - c_1 - c_mu) * C + c_1 * (p_c * p_c.transpose() + delta_h * C) + c_mu * rank_mu;

        sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0));
        sigma = std::clamp(sigma, 1e-12, 4.0);

        const double spread = fitness[lambda - 1].first - fitness[0].first;
        if (std::isfinite(spread) && spread < opts.tol_fun &&
            std::abs(fitness[0].first) < 1e30 && gen > 10)
            break;
    }

    if (!res.any_finite) {
        res.best_x = denorm(m);
        res.best_f = std::numeric_limits<double>::infinity();
        return res;
    }

    res.ranked = archive.entries;
    res.best_f = res.ranked.front().first;
    res.best_x = res.ranked.front().second;

    // one coordinate-wise parabolic polish pass
    Eigen::VectorXd x = res.best_x;
    double fx = res.best_f;
    for (int i = 0; i < n; ++i) {
        const double h = 1e-3 * halfw(i);
        Eigen::VectorXd xl = x, xr = x;
        xl(i) = std::max(lower(i), x(i) - h);
        xr(i) = std::min(upper(i), x(i) + h);
        const double fl = f(xl), fr = f(xr);
        res.evaluations += 2;
        // vertex of the parabola through (x-h, fl), (x, fx), (x+h, fr)
        const double denom = fl - 2.0 * fx + fr;
        if (std::isfinite(fl) && std::isfinite(fr) && denom > 0.0) {
            double step = 0.5 * h * (fl - fr) / denom;
            step = std::clamp(step, -2.0 * h, 2.0 * h);
            Eigen::VectorXd xv = x;
            xv(i) = std::clamp(x(i) + step, lower(i), upper(i));
            const double fv = f(xv);
            ++res.evaluations;
            if (std::isfinite(fv) && fv < fx) {
                x = xv;
                fx = fv;
            }
        } else {
            if (std::isfinite(fl) && fl < fx) {
                x = xl;
                fx = fl;
            }
            if (std::isfinite(fr) && fr < fx) {
                x = xr;
                fx = fr;
            }
        }
    }
    if (fx < res.best_f) {
        res.best_f = fx;
        res.best_x = x;
        archive.offer(fx, x);
        res.ranked = archive.entries;
    }
    return res;
}

}  // namespace wsabi
