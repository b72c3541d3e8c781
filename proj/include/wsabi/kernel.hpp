#pragma once

#include <Eigen/Dense>

#include "wsabi/types.hpp"

namespace wsabi {

/// K(x,y) = lambda^2 exp(-1/2 sum_i (x_i-y_i)^2 / sigma_i^2)
inline double kernel_eval(const KernelParams& params,
                          const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (x.size() != y.size() || x.size() != params.length_scales.size())
        throw std::invalid_argument("kernel_eval: dimension mismatch");
    const double q = ((x - y).cwiseQuotient(params.length_scales)).squaredNorm();
    return params.output_scale * params.output_scale * std::exp(-0.5 * q);
}

/// K(X,X) for row-wise points X (N x D).
inline Eigen::MatrixXd kernel_gram(const KernelParams& params, const Eigen::MatrixXd& X) {
    if (X.cols() != params.length_scales.size())
        throw std::invalid_argument("kernel_gram: dimension mismatch");
    const Eigen::MatrixXd S = X.array().rowwise() / params.length_scales.transpose().array();
    const Eigen::VectorXd sq = S.rowwise().squaredNorm();
    // squared scaled distances via the usual |a|^2 + |b|^2 - 2 a.b expansion
    Eigen::MatrixXd Q = sq.replicate(1, X.rows()) + sq.transpose().replicate(X.rows(), 1) -
                        2.0 * (S * S.transpose());
    const double sf2 = params.output_scale * params.output_scale;
    return sf2 * (-0.5 * Q.array().max(0.0)).exp().matrix();
}

/// k(x) = [K(x_1,x), ..., K(x_N,x)] for row-wise points X.
inline Eigen::VectorXd kernel_cross(const KernelParams& params, const Eigen::MatrixXd& X,
                                    const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (X.cols() != x.size() || x.size() != params.length_scales.size())
        throw std::invalid_argument("kernel_cross: dimension mismatch");
    const Eigen::MatrixXd diff = X.rowwise() - x.transpose();
    const Eigen::VectorXd q =
        (diff.array().rowwise() / params.length_scales.transpose().array()).square().rowwise().sum();
    const double sf2 = params.output_scale * params.output_scale;
    return sf2 * (-0.5 * q.array()).exp().matrix();
}

}  // namespace wsabi
