#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace wsabi {

/// Conditioning failure that survived the full jitter escalation. Carries the
/// last jitter value that was attempted.
class IllConditionedError : public std::runtime_error {
public:
    IllConditionedError(const std::string& what, double jitter_tried)
        : std::runtime_error(what), jitter_(jitter_tried) {}
    double jitter_tried() const noexcept { return jitter_; }

private:
    double jitter_;
};

/// A likelihood observation that is non-positive or non-finite.
class InvalidLikelihoodError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The acquisition surface returned a non-finite value at every probe.
class DegenerateAcquisitionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hyperparameters of the squared-exponential ARD kernel
///   K(x,x') = output_scale^2 * exp(-1/2 sum_i (x_i-x'_i)^2 / length_scales_i^2).
struct KernelParams {
    double output_scale = 1.0;       // lambda
    Eigen::VectorXd length_scales;   // sigma, one per input dimension

    int dim() const { return static_cast<int>(length_scales.size()); }

    void validate() const {
        if (!(output_scale > 0.0) || !std::isfinite(output_scale))
            throw std::invalid_argument("KernelParams: output_scale must be positive and finite");
        if (length_scales.size() < 1)
            throw std::invalid_argument("KernelParams: need at least one length-scale");
        for (Eigen::Index i = 0; i < length_scales.size(); ++i)
            if (!(length_scales(i) > 0.0) || !std::isfinite(length_scales(i)))
                throw std::invalid_argument("KernelParams: length_scales must be positive and finite");
    }
};

/// Immutable set of sample locations and observed values.
class Dataset {
public:
    // Two rows closer than this (per coordinate) count as duplicates; the Gram
    // matrix would be singular.
    static constexpr double kDuplicateTol = 1e-12;

    Dataset(Eigen::MatrixXd locations, Eigen::VectorXd values)
        : locations_(std::move(locations)), values_(std::move(values)) {
        if (locations_.rows() < 1)
            throw std::invalid_argument("Dataset: need at least one sample");
        if (locations_.rows() != values_.size())
            throw std::invalid_argument("Dataset: locations/values count mismatch");
        if (locations_.cols() < 1)
            throw std::invalid_argument("Dataset: dimension must be >= 1");
        if (!values_.allFinite() || !locations_.allFinite())
            throw std::invalid_argument("Dataset: non-finite entries");
        for (Eigen::Index i = 0; i < locations_.rows(); ++i)
            for (Eigen::Index j = i + 1; j < locations_.rows(); ++j)
                if (((locations_.row(i) - locations_.row(j)).cwiseAbs().array() <= kDuplicateTol).all())
                    throw std::invalid_argument("Dataset: duplicate locations at rows " +
                                                std::to_string(i) + " and " + std::to_string(j));
    }

    const Eigen::MatrixXd& locations() const { return locations_; }
    const Eigen::VectorXd& values() const { return values_; }
    int dim() const { return static_cast<int>(locations_.cols()); }
    int count() const { return static_cast<int>(locations_.rows()); }

private:
    Eigen::MatrixXd locations_;  // N x D
    Eigen::VectorXd values_;     // N
};

/// Gaussian prior N(x; mean, diag(variances)).
struct GaussianPrior {
    Eigen::VectorXd mean;       // nu
    Eigen::VectorXd variances;  // diagonal of Lambda

    int dim() const { return static_cast<int>(mean.size()); }

    void validate() const {
        if (mean.size() < 1 || mean.size() != variances.size())
            throw std::invalid_argument("GaussianPrior: mean/variances size mismatch");
        for (Eigen::Index i = 0; i < variances.size(); ++i)
            if (!(variances(i) > 0.0) || !std::isfinite(variances(i)))
                throw std::invalid_argument("GaussianPrior: variances must be positive and finite");
    }

    Eigen::VectorXd stddev() const { return variances.cwiseSqrt(); }

    double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
        constexpr double log2pi = 1.8378770664093454836;
        const Eigen::ArrayXd d = (x - mean).array();
        return -0.5 * (d.square() / variances.array()).sum() -
               0.5 * variances.array().log().sum() - 0.5 * dim() * log2pi;
    }

    double density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
        return std::exp(log_density(x));
    }
};

/// Convenience: isotropic prior N(mean_value * 1, variance * I).
inline GaussianPrior isotropic_prior(int dim, double mean_value, double variance) {
    GaussianPrior p;
    p.mean = Eigen::VectorXd::Constant(dim, mean_value);
    p.variances = Eigen::VectorXd::Constant(dim, variance);
    p.validate();
    return p;
}

}  // namespace wsabi
