#include "wsabi/gp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace wsabi {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Cholesky of K + jitter*I with geometric escalation. Returns the factor and the
// jitter actually applied.
std::pair<Eigen::MatrixXd, double> chol_with_escalation(const Eigen::MatrixXd& K, double lambda,
                                                        double base_jitter) {
    const double sf2 = lambda * lambda;
    double jitter = base_jitter < 0.0 ? kBaseJitterScale * sf2 : base_jitter;
    const double max_jitter = kMaxJitterScale * sf2;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(K.rows(), K.cols());
    for (;;) {
        Eigen::LLT<Eigen::MatrixXd> llt(K + jitter * I);
        if (llt.info() == Eigen::Success) return {Eigen::MatrixXd(llt.matrixL()), jitter};
        if (jitter >= max_jitter)
            throw IllConditionedError("Cholesky failed up to maximum jitter", jitter);
        jitter = jitter == 0.0 ? kBaseJitterScale * sf2 : jitter * 10.0;
        jitter = std::min(jitter, max_jitter);
    }
}

}  // namespace

GpPosterior GpPosterior::fit(const Dataset& data, const KernelParams& params, double base_jitter) {
    params.validate();
    if (params.dim() != data.dim())
        throw std::invalid_argument("GpPosterior::fit: kernel/data dimension mismatch");
    GpPosterior gp;
    gp.locations_ = data.locations();
    gp.values_ = data.values();
    gp.params_ = params;
    gp.dim_ = data.dim();
    const Eigen::MatrixXd K = kernel_gram(params, gp.locations_);
    auto [L, jitter] = chol_with_escalation(K, params.output_scale, base_jitter);
    gp.chol_ = std::move(L);
    gp.jitter_ = jitter;
    gp.weights_ = gp.chol_.triangularView<Eigen::Lower>().solve(gp.values_);
    gp.chol_.transpose().triangularView<Eigen::Upper>().solveInPlace(gp.weights_);
    return gp;
}

GpPosterior GpPosterior::prior(const KernelParams& params, int dim) {
    params.validate();
    if (params.dim() != dim) throw std::invalid_argument("GpPosterior::prior: dimension mismatch");
    GpPosterior gp;
    gp.locations_.resize(0, dim);
    gp.values_.resize(0);
    gp.params_ = params;
    gp.chol_.resize(0, 0);
    gp.weights_.resize(0);
    gp.dim_ = dim;
    return gp;
}

double GpPosterior::mean(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (count() == 0) return 0.0;
    return cross(x).dot(weights_);
}

double GpPosterior::cov(const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y) const {
    const double kxy = kernel_eval(params_, x, y);
    if (count() == 0) return kxy;
    const Eigen::VectorXd ax = chol_.triangularView<Eigen::Lower>().solve(cross(x));
    if (&x == &y || x == y) {
        const double raw = kxy - ax.squaredNorm();
        return raw;  // diagonal clamping is done by var()
    }
    const Eigen::VectorXd ay = chol_.triangularView<Eigen::Lower>().solve(cross(y));
    return kxy - ax.dot(ay);
}

double GpPosterior::var_raw(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return cov(x, x);
}

double GpPosterior::var(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const double sf2 = params_.output_scale * params_.output_scale;
    return std::clamp(var_raw(x), 0.0, sf2 + jitter_);
}

Eigen::MatrixXd GpPosterior::solve(const Eigen::MatrixXd& B) const {
    Eigen::MatrixXd X = chol_.triangularView<Eigen::Lower>().solve(B);
    chol_.transpose().triangularView<Eigen::Upper>().solveInPlace(X);
    return X;
}

Eigen::MatrixXd GpPosterior::half_solve(const Eigen::MatrixXd& B) const {
    return chol_.triangularView<Eigen::Lower>().solve(B);
}

GpPosterior fit_posterior(const Dataset& data, const KernelParams& params, double base_jitter) {
    return GpPosterior::fit(data, params, base_jitter);
}

double log_marginal_likelihood(const Dataset& data, const KernelParams& params, double jitter) {
    return log_marginal_likelihood(data, params, jitter, nullptr);
}

double log_marginal_likelihood(const Dataset& data, const KernelParams& params, double jitter,
                               Eigen::VectorXd* grad_log_params) {
    params.validate();
    if (params.dim() != data.dim())
        throw std::invalid_argument("log_marginal_likelihood: dimension mismatch");
    const int n = data.count();
    const Eigen::MatrixXd K = kernel_gram(params, data.locations());
    Eigen::LLT<Eigen::MatrixXd> llt(K + jitter * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() != Eigen::Success)
        throw IllConditionedError("log_marginal_likelihood: Cholesky failed", jitter);
    const Eigen::MatrixXd L = llt.matrixL();
    const Eigen::VectorXd alpha = llt.solve(data.values());
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += std::log(L(i, i));
    logdet *= 2.0;
    const double lml =
        -0.5 * data.values().dot(alpha) - 0.5 * logdet - 0.5 * n * kLog2Pi;

    if (grad_log_params) {
        // d lml / d theta = 1/2 tr((alpha alpha' - (K+jI)^{-1}) dK/dtheta)
        const Eigen::MatrixXd Kinv = llt.solve(Eigen::MatrixXd::Identity(n, n));
        const Eigen::MatrixXd B = alpha * alpha.transpose() - Kinv;
        grad_log_params->resize(1 + data.dim());
        // dK/dlog lambda = 2K
        (*grad_log_params)(0) = (B.cwiseProduct(K)).sum();
        for (int d = 0; d < data.dim(); ++d) {
            // dK/dlog sigma_d = K .* sqdist_d / sigma_d^2
            const Eigen::VectorXd xd = data.locations().col(d);
            const Eigen::MatrixXd Sd =
                (xd.replicate(1, n) - xd.transpose().replicate(n, 1)).array().square().matrix();
            const double inv_s2 = 1.0 / (params.length_scales(d) * params.length_scales(d));
            (*grad_log_params)(1 + d) = 0.5 * (B.cwiseProduct(K.cwiseProduct(Sd))).sum() * inv_s2;
        }
    }
    return lml;
}

// ---------------------------------------------------------------------------
// ML-II
// ---------------------------------------------------------------------------

HyperBounds HyperBounds::from_data(const Dataset& data) {
    HyperBounds b;
    const auto& v = data.values();
    double vscale = 1.0;
    if (data.count() > 1) {
        const double sd = std::sqrt((v.array() - v.mean()).square().sum() / (data.count() - 1));
        vscale = sd > 0.0 ? sd : std::max(v.cwiseAbs().maxCoeff(), 1e-12);
    } else {
        vscale = std::max(v.cwiseAbs().maxCoeff(), 1e-12);
    }
    b.output_scale_min = 1e-4 * vscale;
    b.output_scale_max = 1e4 * vscale;
    b.length_min.resize(data.dim());
    b.length_max.resize(data.dim());
    for (int d = 0; d < data.dim(); ++d) {
        const auto col = data.locations().col(d);
        double xscale = 1.0;
        if (data.count() > 1) {
            const double sd =
                std::sqrt((col.array() - col.mean()).square().sum() / (data.count() - 1));
            if (sd > 0.0) xscale = sd;
        }
        b.length_min(d) = 1e-3 * xscale;
        b.length_max(d) = 1e3 * xscale;
    }
    return b;
}

HyperBounds HyperBounds::from_prior_scales(const Eigen::VectorXd& prior_stddev,
                                           double value_scale) {
    HyperBounds b;
    const double vs = std::max(value_scale, 1e-12);
    b.output_scale_min = 1e-6 * vs;
    b.output_scale_max = 1e6 * vs;
    b.length_min = 1e-2 * prior_stddev;
    b.length_max = 1e2 * prior_stddev;
    return b;
}

namespace {

Eigen::VectorXd to_log(const KernelParams& p) {
    Eigen::VectorXd u(1 + p.dim());
    u(0) = std::log(p.output_scale);
    u.tail(p.dim()) = p.length_scales.array().log();
    return u;
}

KernelParams from_log(const Eigen::VectorXd& u) {
    KernelParams p;
    p.output_scale = std::exp(u(0));
    p.length_scales = u.tail(u.size() - 1).array().exp();
    return p;
}

void clamp_log(Eigen::VectorXd& u, const HyperBounds& b) {
    u(0) = std::clamp(u(0), std::log(b.output_scale_min), std::log(b.output_scale_max));
    for (Eigen::Index d = 0; d + 1 < u.size(); ++d)
        u(d + 1) = std::clamp(u(d + 1), std::log(b.length_min(d)), std::log(b.length_max(d)));
}

// Objective at policy jitter 1e-10 lambda^2; NaN-safe: returns -inf on failure.
double safe_lml(const Dataset& data, const Eigen::VectorXd& u, Eigen::VectorXd* grad) {
    try {
        const KernelParams p = from_log(u);
        const double jitter = kBaseJitterScale * p.output_scale * p.output_scale;
        const double lml = log_marginal_likelihood(data, p, jitter, grad);
        if (!std::isfinite(lml)) return -std::numeric_limits<double>::infinity();
        return lml;
    } catch (const std::exception&) {
        return -std::numeric_limits<double>::infinity();
    }
}

// Gradient ascent with backtracking from u0; returns (u, lml).
std::pair<Eigen::VectorXd, double> ascend(const Dataset& data, Eigen::VectorXd u,
                                          const HyperBounds& bounds, int max_iter) {
    clamp_log(u, bounds);
    Eigen::VectorXd grad;
    double f = safe_lml(data, u, &grad);
    if (!std::isfinite(f)) return {u, f};
    double step = 0.5;
    for (int it = 0; it < max_iter; ++it) {
        if (grad.lpNorm<Eigen::Infinity>() < 1e-7 * (1.0 + std::abs(f))) break;
        Eigen::VectorXd dir = grad;
        const double gn = dir.norm();
        if (gn > 1.0) dir /= gn;  // cap step length in log space
        bool accepted = false;
        for (int bt = 0; bt < 24; ++bt) {
            Eigen::VectorXd u_try = u + step * dir;
            clamp_log(u_try, bounds);
            Eigen::VectorXd grad_try;
            const double f_try = safe_lml(data, u_try, &grad_try);
            if (f_try > f) {
                u = std::move(u_try);
                f = f_try;
                grad = std::move(grad_try);
                step = std::min(step * 2.0, 2.0);
                accepted = true;
                break;
            }
            step *= 0.5;
            if (step < 1e-10) break;
        }
        if (!accepted) break;
    }
    return {u, f};
}

}  // namespace

HyperFit optimize_hyperparams(const Dataset& data, const KernelParams& init, int restarts,
                              std::uint64_t seed, const std::optional<HyperBounds>& bounds_opt) {
    if (restarts < 1) throw std::invalid_argument("optimize_hyperparams: restarts must be >= 1");
    init.validate();
    const HyperBounds bounds = bounds_opt ? *bounds_opt : HyperBounds::from_data(data);

    const double f_init = safe_lml(data, to_log(init), nullptr);

    // Data-driven heuristic start: sigma from location spread, lambda from value spread.
    KernelParams heur = init;
    {
        const auto& v = data.values();
        if (data.count() > 1) {
            const double sd =
                std::sqrt((v.array() - v.mean()).square().sum() / (data.count() - 1));
            if (sd > 0.0) heur.output_scale = sd;
            for (int d = 0; d < data.dim(); ++d) {
                const auto col = data.locations().col(d);
                const double xsd =
                    std::sqrt((col.array() - col.mean()).square().sum() / (data.count() - 1));
                if (xsd > 0.0) heur.length_scales(d) = xsd;
            }
        }
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jiggle(0.0, 0.5);

    Eigen::VectorXd best_u = to_log(init);
    double best_f = f_init;
    bool any_finite = std::isfinite(f_init);
    const int max_iter = 60;

    for (int r = 0; r < restarts; ++r) {
        Eigen::VectorXd u0;
        if (r == 0) {
            u0 = to_log(init);
        } else {
            u0 = to_log(heur);
            if (r > 1)
                for (Eigen::Index i = 0; i < u0.size(); ++i) u0(i) += jiggle(rng);
        }
        auto [u, f] = ascend(data, std::move(u0), bounds, max_iter);
        if (std::isfinite(f)) {
            any_finite = true;
            if (f > best_f) {
                best_f = f;
                best_u = std::move(u);
            }
        }
    }

    HyperFit out;
    if (!any_finite) {
        out.params = init;
        out.log_marginal = f_init;
        out.all_starts_failed = true;
        return out;
    }
    // Never worse than init.
    if (std::isfinite(f_init) && best_f < f_init) {
        out.params = init;
        out.log_marginal = f_init;
    } else {
        out.params = from_log(best_u);
        out.log_marginal = best_f;
    }
    return out;
}

}  // namespace wsabi
