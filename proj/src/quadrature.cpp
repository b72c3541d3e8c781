#include "wsabi/quadrature.hpp"

#include <cmath>

namespace wsabi {

namespace {

void check_dims(const KernelParams& params, const GaussianPrior& prior) {
    if (params.dim() != prior.dim())
        throw std::invalid_argument("quadrature: kernel/prior dimension mismatch");
}

double clamp_variance(double raw, double scale) {
    // Gram-solve round-off can push tiny variances negative. Values below the
    // warn threshold indicate a real problem, not round-off.
    if (raw < -1e-8 * std::max(scale, 1e-300))
        std::fprintf(stderr, "[wsabi] warning: clamping variance %.3e (scale %.3e)\n", raw, scale);
    return raw < 0.0 ? 0.0 : raw;
}

}  // namespace

double kernel_prior_integral(const KernelParams& params,
                             const Eigen::Ref<const Eigen::VectorXd>& a,
                             const GaussianPrior& prior) {
    check_dims(params, prior);
    if (a.size() != params.dim())
        throw std::invalid_argument("kernel_prior_integral: point dimension mismatch");
    double log_prod = 0.0;
    for (int i = 0; i < params.dim(); ++i) {
        const double s2 = params.length_scales(i) * params.length_scales(i);
        const double t = s2 + prior.variances(i);
        const double d = a(i) - prior.mean(i);
        log_prod += 0.5 * std::log(s2 / t) - 0.5 * d * d / t;
    }
    return params.output_scale * params.output_scale * std::exp(log_prod);
}

double kernel_pair_prior_integral(const KernelParams& params,
                                  const Eigen::Ref<const Eigen::VectorXd>& a,
                                  const Eigen::Ref<const Eigen::VectorXd>& b,
                                  const GaussianPrior& prior) {
    check_dims(params, prior);
    if (a.size() != params.dim() || b.size() != params.dim())
        throw std::invalid_argument("kernel_pair_prior_integral: point dimension mismatch");
    double log_prod = 0.0;
    for (int i = 0; i < params.dim(); ++i) {
        const double s2 = params.length_scales(i) * params.length_scales(i);
        const double t = s2 + 2.0 * prior.variances(i);
        const double dab = a(i) - b(i);
        const double m = 0.5 * (a(i) + b(i)) - prior.mean(i);
        log_prod += 0.5 * std::log(s2 / t) - 0.25 * dab * dab / s2 - m * m / t;
    }
    const double sf2 = params.output_scale * params.output_scale;
    return sf2 * sf2 * std::exp(log_prod);
}

double kernel_double_prior_integral(const KernelParams& params, const GaussianPrior& prior) {
    check_dims(params, prior);
    double log_prod = 0.0;
    for (int i = 0; i < params.dim(); ++i) {
        const double s2 = params.length_scales(i) * params.length_scales(i);
        log_prod += 0.5 * std::log(s2 / (s2 + 2.0 * prior.variances(i)));
    }
    return params.output_scale * params.output_scale * std::exp(log_prod);
}

double cross_pair_double_integral(const KernelParams& params,
                                  const Eigen::Ref<const Eigen::VectorXd>& a,
                                  const Eigen::Ref<const Eigen::VectorXd>& b,
                                  const GaussianPrior& prior) {
    check_dims(params, prior);
    if (a.size() != params.dim() || b.size() != params.dim())
        throw std::invalid_argument("cross_pair_double_integral: point dimension mismatch");
    // Per dimension, with coordinates centered at nu:
    //   int int e(x,a) e(x,x') e(x',b) N(x;0,L) N(x';0,L) dx dx'
    // is a 2-D Gaussian integral with precision [[p,-q],[-q,p]], p = 2/s2 + 1/L,
    // q = 1/s2, linear term (a/s2, b/s2).
    double log_prod = 0.0;
    for (int i = 0; i < params.dim(); ++i) {
        const double s2 = params.length_scales(i) * params.length_scales(i);
        const double L = prior.variances(i);
        const double ac = a(i) - prior.mean(i);
        const double bc = b(i) - prior.mean(i);
        const double p = 2.0 / s2 + 1.0 / L;
        const double q = 1.0 / s2;
        const double det = p * p - q * q;
        const double expo = (p * (ac * ac + bc * bc) + 2.0 * q * ac * bc) / (2.0 * s2 * s2 * det) -
                            (ac * ac + bc * bc) / (2.0 * s2);
        log_prod += -std::log(L) - 0.5 * std::log(det) + expo;
    }
    const double sf2 = params.output_scale * params.output_scale;
    return sf2 * sf2 * sf2 * std::exp(log_prod);
}

KernelParams squared_kernel_params(const KernelParams& params) {
    KernelParams sq;
    sq.output_scale = params.output_scale * params.output_scale;
    sq.length_scales = params.length_scales / std::sqrt(2.0);
    return sq;
}

Eigen::VectorXd prior_integral_vector(const KernelParams& params, const Eigen::MatrixXd& X,
                                      const GaussianPrior& prior) {
    Eigen::VectorXd u(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        u(i) = kernel_prior_integral(params, X.row(i).transpose(), prior);
    return u;
}

Eigen::MatrixXd pair_integral_matrix(const KernelParams& params, const Eigen::MatrixXd& X,
                                     const GaussianPrior& prior) {
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd W(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double w =
                kernel_pair_prior_integral(params, X.row(i).transpose(), X.row(j).transpose(), prior);
            W(i, j) = w;
            W(j, i) = w;
        }
    return W;
}

Eigen::MatrixXd cross_integral_matrix(const KernelParams& params, const Eigen::MatrixXd& X,
                                      const GaussianPrior& prior) {
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd T(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double t =
                cross_pair_double_integral(params, X.row(i).transpose(), X.row(j).transpose(), prior);
            T(i, j) = t;
            T(j, i) = t;
        }
    return T;
}

// ---------------------------------------------------------------------------
// Evidence
// ---------------------------------------------------------------------------

EvidenceEstimate evidence_wsabi_l(const WarpedModel& model, const GaussianPrior& prior) {
    if (model.flavour != WarpFlavour::Linearised)
        throw std::invalid_argument("evidence_wsabi_l: model flavour is not Linearised");
    const GpPosterior& gp = model.gp;
    check_dims(gp.params(), prior);
    EvidenceEstimate est;
    est.method = "wsabi-l";
    est.n_samples = gp.count();
    if (gp.count() == 0) {
        est.mean = model.alpha;
        est.variance = 0.0;
        return est;
    }
    const Eigen::VectorXd& z = gp.weights();
    const Eigen::MatrixXd W = pair_integral_matrix(gp.params(), gp.locations(), prior);
    const Eigen::MatrixXd T = cross_integral_matrix(gp.params(), gp.locations(), prior);
    est.mean = model.alpha + 0.5 * z.dot(W * z);
    const Eigen::VectorXd Wz = W * z;
    const double raw_var = z.dot(T * z) - Wz.dot(gp.solve(Wz));
    est.variance = clamp_variance(raw_var, est.mean * est.mean);
    return est;
}

EvidenceEstimate evidence_wsabi_m(const WarpedModel& model, const GaussianPrior& prior) {
    if (model.flavour != WarpFlavour::MomentMatched)
        throw std::invalid_argument("evidence_wsabi_m: model flavour is not MomentMatched");
    const GpPosterior& gp = model.gp;
    check_dims(gp.params(), prior);
    const double sf2 = gp.params().output_scale * gp.params().output_scale;
    const double dd_sq = squared_kernel_double_prior_integral(gp.params(), prior);

    EvidenceEstimate est;
    est.method = "wsabi-m";
    est.n_samples = gp.count();
    if (gp.count() == 0) {
        // int Ct(x,x) pi dx = lambda^2 and int int Ct^2 pipi = int int K^2 pipi
        est.mean = model.alpha + 0.5 * sf2;
        est.variance = clamp_variance(0.5 * dd_sq, est.mean * est.mean);
        return est;
    }
    const Eigen::VectorXd& z = gp.weights();
    const Eigen::MatrixXd W = pair_integral_matrix(gp.params(), gp.locations(), prior);
    const Eigen::MatrixXd T = cross_integral_matrix(gp.params(), gp.locations(), prior);

    const Eigen::MatrixXd KinvW = gp.solve(W);
    const Eigen::MatrixXd KinvT = gp.solve(T);
    // int Ct(x,x) pi dx = lambda^2 - tr(K^{-1} W), non-negative up to round-off
    const double cbar = sf2 - KinvW.trace();
    est.mean = model.alpha + 0.5 * (z.dot(W * z) + cbar);

    const Eigen::VectorXd Wz = W * z;
    const double var_mcm = z.dot(T * z) - Wz.dot(gp.solve(Wz));
    // int int Ct(x,x')^2 pipi = int int K^2 pipi - 2 tr(K^{-1}T) + tr((K^{-1}W)^2)
    const double var_csq = dd_sq - 2.0 * KinvT.trace() + (KinvW * KinvW).trace();
    est.variance = clamp_variance(0.5 * var_csq + var_mcm, est.mean * est.mean);
    return est;
}

EvidenceEstimate evidence_bmc(const GpPosterior& gp, const GaussianPrior& prior) {
    check_dims(gp.params(), prior);
    EvidenceEstimate est;
    est.method = "bmc";
    est.n_samples = gp.count();
    const double dd = kernel_double_prior_integral(gp.params(), prior);
    if (gp.count() == 0) {
        est.mean = 0.0;
        est.variance = dd;
        return est;
    }
    const Eigen::VectorXd u = prior_integral_vector(gp.params(), gp.locations(), prior);
    est.mean = u.dot(gp.weights());
    const double raw_var = dd - u.dot(gp.solve(u));
    est.variance = clamp_variance(raw_var, dd);
    return est;
}

EvidenceEstimate evidence_bmc(const Dataset& raw_data, const KernelParams& params,
                              const GaussianPrior& prior, double base_jitter) {
    return evidence_bmc(GpPosterior::fit(raw_data, params, base_jitter), prior);
}

EvidenceEstimate evidence_bmc(const KernelParams& params, const GaussianPrior& prior) {
    return evidence_bmc(GpPosterior::prior(params, params.dim()), prior);
}

}  // namespace wsabi
