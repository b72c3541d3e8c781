#include "wsabi/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "wsabi/gp.hpp"

namespace wsabi {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

MixtureLikelihood gen_synthetic_mixture(int dim, std::uint64_t seed, double domain_half_width) {
    if (dim < 1) throw std::invalid_argument("gen_synthetic_mixture: dim must be >= 1");
    if (!(domain_half_width > 0.0))
        throw std::invalid_argument("gen_synthetic_mixture: domain_half_width must be > 0");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> k_dist(5, 14);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> scale_dist(21, 29);

    MixtureLikelihood mix;
    mix.domain_half_width = domain_half_width;
    const int k = k_dist(rng);

    // stick-breaking: sorted uniform cuts of [0,1], then differences
    std::vector<double> cuts(k - 1);
    for (double& c : cuts) c = u01(rng);
    std::sort(cuts.begin(), cuts.end());
    mix.weights.resize(k);
    double prev = 0.0;
    for (int i = 0; i < k - 1; ++i) {
        mix.weights(i) = cuts[i] - prev;
        prev = cuts[i];
    }
    mix.weights(k - 1) = 1.0 - prev;

    // means uniform over the inner box (half the domain half-width per axis)
    mix.means.resize(k, dim);
    for (int i = 0; i < k; ++i)
        for (int d = 0; d < dim; ++d)
            mix.means(i, d) = (u01(rng) - 0.5) * domain_half_width;

    // per-axis sd = integer in 21..29 times the base unit (half-width / 100)
    const double base = domain_half_width / 100.0;
    mix.variances.resize(k, dim);
    for (int i = 0; i < k; ++i)
        for (int d = 0; d < dim; ++d) {
            const double sd = scale_dist(rng) * base;
            mix.variances(i, d) = sd * sd;
        }
    return mix;
}

double mixture_eval(const MixtureLikelihood& mix, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != mix.dim()) throw std::invalid_argument("mixture_eval: dimension mismatch");
    const int k = mix.components();
    Eigen::VectorXd logs(k);
    for (int i = 0; i < k; ++i) {
        const Eigen::ArrayXd d = x.transpose().array() - mix.means.row(i).array();
        const Eigen::ArrayXd v = mix.variances.row(i).array();
        logs(i) = std::log(mix.weights(i)) - 0.5 * (d.square() / v).sum() -
                  0.5 * v.log().sum() - 0.5 * mix.dim() * kLog2Pi;
    }
    const double m = logs.maxCoeff();
    return std::exp(m) * (logs.array() - m).exp().sum();
}

double analytic_mixture_evidence(const MixtureLikelihood& mix, const GaussianPrior& prior) {
    if (prior.dim() != mix.dim())
        throw std::invalid_argument("analytic_mixture_evidence: dimension mismatch");
    const int k = mix.components();
    Eigen::VectorXd logs(k);
    for (int i = 0; i < k; ++i) {
        const Eigen::ArrayXd d = mix.means.row(i).transpose().array() - prior.mean.array();
        const Eigen::ArrayXd v = mix.variances.row(i).transpose().array() + prior.variances.array();
        logs(i) = std::log(mix.weights(i)) - 0.5 * (d.square() / v).sum() -
                  0.5 * v.log().sum() - 0.5 * mix.dim() * kLog2Pi;
    }
    const double m = logs.maxCoeff();
    return std::exp(m) * (logs.array() - m).exp().sum();
}

GaussianPrior mixture_prior(int dim, double domain_half_width) {
    const double sd = domain_half_width / 5.0;
    return isotropic_prior(dim, 0.0, sd * sd);
}

LikelihoodFn mixture_likelihood(const MixtureLikelihood& mix) {
    return LikelihoodFn(mix.dim(), [mix](const Eigen::VectorXd& x) { return mixture_eval(mix, x); });
}

// ---------------------------------------------------------------------------
// Regression evidence problem
// ---------------------------------------------------------------------------

RegressionEvidenceProblem make_regression_problem(Eigen::MatrixXd inputs, Eigen::VectorXd targets,
                                                  double hyperprior_variance) {
    if (inputs.rows() < 2) throw std::invalid_argument("regression problem: need at least 2 rows");
    if (inputs.rows() != targets.size())
        throw std::invalid_argument("regression problem: inputs/targets mismatch");
    if (!(hyperprior_variance > 0.0))
        throw std::invalid_argument("regression problem: hyperprior variance must be > 0");

    // standardize to zero mean / unit variance; constant columns stay centered
    auto standardize = [](Eigen::Ref<Eigen::VectorXd> col) {
        const double mean = col.mean();
        col.array() -= mean;
        const double sd = std::sqrt(col.squaredNorm() / (col.size() - 1));
        if (sd > 0.0) col /= sd;
    };
    for (Eigen::Index d = 0; d < inputs.cols(); ++d) standardize(inputs.col(d));
    standardize(targets);

    RegressionEvidenceProblem p;
    p.inputs = std::move(inputs);
    p.targets = std::move(targets);
    p.hyperprior = isotropic_prior(static_cast<int>(p.inputs.cols()) + 2, 0.0, hyperprior_variance);
    return p;
}

RegressionEvidenceProblem load_regression_problem(const std::string& path,
                                                  double hyperprior_variance, bool has_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_regression_problem: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && line_no == 1) continue;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error("load_regression_problem: bad value at line " +
                                         std::to_string(line_no));
            }
            while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
            if (pos != cell.size())
                throw std::runtime_error("load_regression_problem: bad value at line " +
                                         std::to_string(line_no));
            row.push_back(v);
        }
        if (row.size() < 2)
            throw std::runtime_error("load_regression_problem: need >= 2 columns at line " +
                                     std::to_string(line_no));
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw std::runtime_error("load_regression_problem: ragged row at line " +
                                     std::to_string(line_no));
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2)
        throw std::runtime_error("load_regression_problem: need at least 2 data rows");

    const int m = static_cast<int>(rows.size());
    const int d = static_cast<int>(width) - 1;
    Eigen::MatrixXd inputs(m, d);
    Eigen::VectorXd targets(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) inputs(i, j) = rows[i][j];
        targets(i) = rows[i][d];
    }
    return make_regression_problem(std::move(inputs), std::move(targets), hyperprior_variance);
}

double regression_log_likelihood(const RegressionEvidenceProblem& problem,
                                 const Eigen::Ref<const Eigen::VectorXd>& log_hypers,
                                 bool* floored) {
    if (log_hypers.size() != problem.hyper_dim())
        throw std::invalid_argument("regression_log_likelihood: hyper dimension mismatch");
    if (!log_hypers.allFinite())
        throw std::invalid_argument("regression_log_likelihood: non-finite hypers");
    if (floored) *floored = false;

    KernelParams params;
    params.output_scale = std::exp(log_hypers(0));
    params.length_scales = log_hypers.segment(1, problem.data_dim()).array().exp();
    const double noise_var = std::exp(log_hypers(problem.hyper_dim() - 1));

    try {
        Dataset data(problem.inputs, problem.targets);
        return log_marginal_likelihood(data, params, noise_var);
    } catch (const std::exception&) {
        if (floored) *floored = true;
        return problem.log_floor;
    }
}

ShiftedRegressionLikelihood::ShiftedRegressionLikelihood(RegressionEvidenceProblem problem,
                                                         double log_shift)
    : problem_(std::move(problem)), shift_(log_shift) {}

ShiftedRegressionLikelihood ShiftedRegressionLikelihood::from_initial_design(
    RegressionEvidenceProblem problem) {
    const GaussianPrior& hp = problem.hyperprior;
    Eigen::VectorXd axis = hp.mean;
    axis(0) += std::sqrt(hp.variances(0));
    const double shift = std::max(regression_log_likelihood(problem, hp.mean),
                                  regression_log_likelihood(problem, axis));
    return ShiftedRegressionLikelihood(std::move(problem), shift);
}

double ShiftedRegressionLikelihood::operator()(
    const Eigen::Ref<const Eigen::VectorXd>& log_hypers) const {
    const double logl = regression_log_likelihood(problem_, log_hypers);
    // clamp the shifted exponent so the value stays strictly positive in double
    return std::exp(std::clamp(logl - shift_, -690.0, 690.0));
}

LikelihoodFn ShiftedRegressionLikelihood::as_likelihood() const {
    ShiftedRegressionLikelihood copy = *this;
    return LikelihoodFn(problem_.hyper_dim(),
                        [copy](const Eigen::VectorXd& x) { return copy(x); });
}

// ---------------------------------------------------------------------------
// Conjugate toy
// ---------------------------------------------------------------------------

LikelihoodFn conjugate_gaussian_likelihood(int dim) {
    return LikelihoodFn(dim, [dim](const Eigen::VectorXd& x) {
        return std::exp(-0.5 * x.squaredNorm() - 0.5 * dim * kLog2Pi);
    });
}

double conjugate_gaussian_log_evidence(int dim) {
    // int N(x;0,I) N(x;0,I) dx = N(0; 0, 2I) = (4 pi)^{-D/2}
    return -0.5 * dim * std::log(4.0 * M_PI);
}

}  // namespace wsabi
