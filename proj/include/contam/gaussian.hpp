#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "contam/errors.hpp"
#include "contam/rng.hpp"

namespace contam {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Throws ConfigError unless `sigma` is square, symmetric and positive semidefinite.
template <typename Scalar>
void validate_covariance(const Matrix<Scalar>& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
        throw ConfigError("covariance must be a non-empty square matrix");
    }
    const Scalar scale = std::max<Scalar>(Scalar(1), sigma.cwiseAbs().maxCoeff());
    const Scalar tol = Scalar(1e-10) * scale;
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > tol) {
        throw ConfigError("covariance must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(sigma, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tol) {
        throw ConfigError("covariance must be positive semidefinite");
    }
}

template <typename Scalar>
Matrix<Scalar> diagonal_covariance(const Vector<Scalar>& variances) {
    return variances.asDiagonal();
}

/// Draws mean-zero noise with covariance sigma as L z, z standard normal, sigma = L L^T.
template <typename Scalar>
class GaussianSampler {
public:
    explicit GaussianSampler(const Matrix<Scalar>& sigma) {
        validate_covariance(sigma);
        Eigen::LLT<Matrix<Scalar>> llt(sigma);
        if (llt.info() == Eigen::Success) {
            factor_ = llt.matrixL();
        } else {
            // Semidefinite: fall back to the symmetric square root.
            Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(sigma);
            const Vector<Scalar> root = eig.eigenvalues().cwiseMax(Scalar(0)).cwiseSqrt();
            factor_ = eig.eigenvectors() * root.asDiagonal();
        }
        zero_ = factor_.isZero(Scalar(0));
        z_.resize(factor_.cols());
    }

    Eigen::Index dimension() const { return factor_.rows(); }
    const Matrix<Scalar>& factor() const { return factor_; }

    /// Writes one draw into `out` (already sized). Not safe to share across threads.
    void draw(RngStream& rng, Vector<Scalar>& out) const {
        for (Eigen::Index i = 0; i < z_.size(); ++i) z_(i) = static_cast<Scalar>(rng.normal());
        if (zero_) {
            out.setZero();
        } else {
            out.noalias() = factor_ * z_;
        }
    }

    Vector<Scalar> operator()(RngStream& rng) const {
        Vector<Scalar> out(factor_.rows());
        draw(rng, out);
        return out;
    }

private:
    Matrix<Scalar> factor_;
    mutable Vector<Scalar> z_;
    bool zero_ = false;
};

}  // namespace contam
