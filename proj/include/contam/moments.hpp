#pragma once

#include <optional>

#include <Eigen/Dense>

#include "contam/errors.hpp"

namespace contam {

/**
 * Single-pass mean and covariance of vector samples (Welford update, Chan merge).
 *
 * M2 holds the unnormalized sum of outer products of deviations from the running
 * mean. The covariance uses the n-1 denominator and is undefined below two samples.
 */
template <typename Scalar>
class MomentAccumulator {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    explicit MomentAccumulator(Eigen::Index dimension)
        : mean_(Vector::Zero(dimension)),
          m2_(Matrix::Zero(dimension, dimension)),
          delta_(dimension),
          delta2_(dimension) {}

    template <typename Derived>
    void push(const Eigen::MatrixBase<Derived>& sample) {
        if (sample.size() != mean_.size()) {
            throw ConfigError("MomentAccumulator: sample dimension mismatch");
        }
        ++count_;
        delta_ = sample - mean_;
        mean_ += delta_ / static_cast<Scalar>(count_);
        delta2_ = sample - mean_;
        m2_.noalias() += delta_ * delta2_.transpose();
    }

    void push(Scalar value) {
        Vector v(1);
        v(0) = value;
        push(v);
    }

    void merge(const MomentAccumulator& other) {
        if (other.dimension() != dimension()) {
            throw ConfigError("MomentAccumulator: merge dimension mismatch");
        }
        if (other.count_ == 0) return;
        if (count_ == 0) {
            *this = other;
            return;
        }
        const auto na = static_cast<Scalar>(count_);
        const auto nb = static_cast<Scalar>(other.count_);
        const Scalar n = na + nb;
        const Vector delta = other.mean_ - mean_;
        mean_ += delta * (nb / n);
        m2_ += other.m2_;
        m2_.noalias() += (delta * delta.transpose()) * (na * nb / n);
        count_ += other.count_;
    }

    long long count() const { return count_; }
    Eigen::Index dimension() const { return mean_.size(); }
    const Vector& mean() const { return mean_; }
    const Matrix& m2() const { return m2_; }

    std::optional<Matrix> covariance() const {
        if (count_ < 2) return std::nullopt;
        return Matrix(m2_ / static_cast<Scalar>(count_ - 1));
    }

    std::optional<Scalar> trace_variance() const {
        if (count_ < 2) return std::nullopt;
        return m2_.trace() / static_cast<Scalar>(count_ - 1);
    }

private:
    long long count_ = 0;
    Vector mean_;
    Matrix m2_;
    Vector delta_;
    Vector delta2_;
};

template <typename Scalar>
MomentAccumulator<Scalar> merge(MomentAccumulator<Scalar> left, const MomentAccumulator<Scalar>& right) {
    left.merge(right);
    return left;
}

using MomentAccumulatord = MomentAccumulator<double>;

}  // namespace contam
