#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "contam/errors.hpp"
#include "contam/gaussian.hpp"
#include "contam/moments.hpp"
#include "contam/parallel.hpp"
#include "contam/rng.hpp"

namespace contam {

/**
 * Rule producing the simplex row w^t used to combine X_1..X_t into Y_t.
 *
 * HatAlpha(a) upweights the first round: w^t = (1, 1-a, ..., 1-a) / gamma_t with
 * gamma_t = 1 + (t-1)(1-a), so every row sums to one. Custom rows are checked
 * against the simplex on construction.
 */
class WeightingScheme {
public:
    enum class Kind { Uniform, Simple, HatAlpha, Custom };

    static WeightingScheme uniform() { return WeightingScheme(Kind::Uniform); }
    static WeightingScheme simple() { return WeightingScheme(Kind::Simple); }
    static WeightingScheme hat_alpha(double alpha) {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("hat_alpha: alpha must lie in [0, 1]");
        WeightingScheme s(Kind::HatAlpha);
        s.alpha_ = alpha;
        return s;
    }
    static WeightingScheme custom(std::vector<Eigen::VectorXd> rows) {
        for (std::size_t i = 0; i < rows.size(); ++i) check_simplex_row(rows[i], static_cast<int>(i) + 1);
        WeightingScheme s(Kind::Custom);
        s.rows_ = std::move(rows);
        return s;
    }

    /// Parses "uniform", "simple" or "hat" (the latter bound to `alpha`).
    static WeightingScheme from_tag(const std::string& tag, double alpha) {
        if (tag == "uniform") return uniform();
        if (tag == "simple") return simple();
        if (tag == "hat") return hat_alpha(alpha);
        throw ConfigError("unknown weighting scheme '" + tag + "'");
    }

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    const std::vector<Eigen::VectorXd>& rows() const { return rows_; }

    std::string tag() const {
        switch (kind_) {
            case Kind::Uniform: return "uniform";
            case Kind::Simple: return "simple";
            case Kind::HatAlpha: return "hat";
            default: return "custom";
        }
    }

    /// Largest t for which a row exists.
    int max_t() const {
        return kind_ == Kind::Custom ? static_cast<int>(rows_.size()) : std::numeric_limits<int>::max();
    }

    static void check_simplex_row(const Eigen::VectorXd& row, int t) {
        if (row.size() != t) {
            throw ConfigError("custom weighting row " + std::to_string(t) + " must have length " + std::to_string(t));
        }
        if ((row.array() < 0.0).any() || std::abs(row.sum() - 1.0) > 1e-12) {
            throw ConfigError("custom weighting row " + std::to_string(t) + " is not in the probability simplex");
        }
    }

private:
    explicit WeightingScheme(Kind kind) : kind_(kind) {}

    Kind kind_;
    double alpha_ = 0.0;
    std::vector<Eigen::VectorXd> rows_;
};

inline double hat_gamma(double alpha, int t) { return 1.0 + static_cast<double>(t - 1) * (1.0 - alpha); }

inline Eigen::VectorXd scheme_row(const WeightingScheme& scheme, int t) {
    if (t < 1) throw DomainError("scheme_row: t must be positive");
    switch (scheme.kind()) {
        case WeightingScheme::Kind::Uniform:
            return Eigen::VectorXd::Constant(t, 1.0 / t);
        case WeightingScheme::Kind::Simple: {
            Eigen::VectorXd row = Eigen::VectorXd::Zero(t);
            row(0) = 1.0;
            return row;
        }
        case WeightingScheme::Kind::HatAlpha: {
            const double a = scheme.alpha();
            const double gamma = hat_gamma(a, t);
            Eigen::VectorXd row = Eigen::VectorXd::Constant(t, (1.0 - a) / gamma);
            row(0) = 1.0 / gamma;
            return row;
        }
        case WeightingScheme::Kind::Custom:
            break;
    }
    if (t > scheme.max_t()) throw ConfigError("custom weighting scheme has no row for t=" + std::to_string(t));
    return scheme.rows()[static_cast<std::size_t>(t - 1)];
}

template <typename Scalar>
struct ContaminationConfig {
    Scalar alpha = 0;
    Vector<Scalar> mu;
    Matrix<Scalar> sigma;
    int horizon = 1;

    Eigen::Index dimension() const { return mu.size(); }

    void validate() const {
        if (!(alpha >= 0 && alpha <= 1)) throw ConfigError("alpha must lie in [0, 1]");
        if (mu.size() == 0) throw ConfigError("mu must be non-empty");
        if (sigma.rows() != mu.size() || sigma.cols() != mu.size()) {
            throw ConfigError("sigma must be d x d with d = |mu|");
        }
        if (horizon < 1) throw ConfigError("horizon must be positive");
        validate_covariance<Scalar>(sigma);
    }

    /// One-dimensional process with mean mu and noise variance sigma2.
    static ContaminationConfig scalar(Scalar alpha, Scalar mu, Scalar sigma2, int horizon) {
        ContaminationConfig c;
        c.alpha = alpha;
        c.mu = Vector<Scalar>::Constant(1, mu);
        c.sigma = Matrix<Scalar>::Constant(1, 1, sigma2);
        c.horizon = horizon;
        return c;
    }
};

template <typename Scalar>
struct Trajectory {
    std::vector<Vector<Scalar>> xs;
    std::vector<Vector<Scalar>> ys;
};

/**
 * Simulates X_1 = mu + U_1, X_t = alpha Y_{t-1} + (1-alpha) mu + U_t and
 * Y_t = sum_s w^t_s X_s, with Y_t formed directly from scheme_row.
 *
 * `noise` must provide draw(RngStream&, Vector&) yielding mean-zero noise.
 */
template <typename Scalar, typename NoiseSampler>
Trajectory<Scalar> simulate_trajectory(const ContaminationConfig<Scalar>& config, const WeightingScheme& scheme,
                                       RngStream& rng, const NoiseSampler& noise) {
    config.validate();
    if (scheme.max_t() < config.horizon) throw ConfigError("weighting scheme rows do not reach the horizon");
    const Eigen::Index d = config.dimension();
    Trajectory<Scalar> traj;
    traj.xs.reserve(static_cast<std::size_t>(config.horizon));
    traj.ys.reserve(static_cast<std::size_t>(config.horizon));
    Vector<Scalar> u(d);
    for (int t = 1; t <= config.horizon; ++t) {
        noise.draw(rng, u);
        Vector<Scalar> x = t == 1 ? Vector<Scalar>(config.mu + u)
                                  : Vector<Scalar>(config.alpha * traj.ys.back() + (1 - config.alpha) * config.mu + u);
        traj.xs.push_back(std::move(x));
        const Eigen::VectorXd w = scheme_row(scheme, t);
        Vector<Scalar> y = Vector<Scalar>::Zero(d);
        for (int s = 0; s < t; ++s) y += static_cast<Scalar>(w(s)) * traj.xs[static_cast<std::size_t>(s)];
        traj.ys.push_back(std::move(y));
    }
    return traj;
}

template <typename Scalar>
Trajectory<Scalar> simulate_trajectory(const ContaminationConfig<Scalar>& config, const WeightingScheme& scheme,
                                       RngStream& rng) {
    config.validate();
    return simulate_trajectory(config, scheme, rng, GaussianSampler<Scalar>(config.sigma));
}

/// Running Y_t for one replicate; O(1) per round except for custom schemes.
/// Keeps a reference to `scheme`, which must outlive the stream.
template <typename Scalar>
class EstimateStream {
public:
    EstimateStream(const WeightingScheme& scheme, Eigen::Index dimension)
        : scheme_(scheme), y_(Vector<Scalar>::Zero(dimension)) {}

    const Vector<Scalar>& push(const Vector<Scalar>& x) {
        ++t_;
        switch (scheme_.kind()) {
            case WeightingScheme::Kind::Uniform:
                y_ += (x - y_) / static_cast<Scalar>(t_);
                break;
            case WeightingScheme::Kind::Simple:
                if (t_ == 1) y_ = x;
                break;
            case WeightingScheme::Kind::HatAlpha: {
                const double a = scheme_.alpha();
                if (t_ == 1) {
                    y_ = x;
                } else {
                    const auto prev = static_cast<Scalar>(hat_gamma(a, t_ - 1));
                    const auto cur = static_cast<Scalar>(hat_gamma(a, t_));
                    y_ = (prev * y_ + static_cast<Scalar>(1.0 - a) * x) / cur;
                }
                break;
            }
            case WeightingScheme::Kind::Custom: {
                history_.push_back(x);
                const Eigen::VectorXd w = scheme_row(scheme_, t_);
                y_.setZero();
                for (int s = 0; s < t_; ++s) y_ += static_cast<Scalar>(w(s)) * history_[static_cast<std::size_t>(s)];
                break;
            }
        }
        return y_;
    }

private:
    const WeightingScheme& scheme_;
    Vector<Scalar> y_;
    std::vector<Vector<Scalar>> history_;
    int t_ = 0;
};

struct VarianceEstimate {
    int t = 0;
    double trace_var = 0.0;
    double std_error = 0.0;                  // batch-means standard error; NaN below two batches
    std::optional<Eigen::MatrixXd> covariance;  // per-entry covariance, kept for d <= 4
};

struct MonteCarloOptions {
    unsigned threads = default_thread_count();
    std::uint64_t experiment = 0;  // replicate r uses stream_key(experiment, r)
    int max_batches = 64;
};

/**
 * Trace of the sample covariance of Y_t across independent replicates, t = 1..horizon.
 *
 * Replicates are grouped into contiguous batches; batch accumulators are merged in
 * batch order, so results do not depend on the thread count. The standard error is
 * the spread of per-batch trace variances over sqrt(#batches).
 */
template <typename Scalar>
std::vector<VarianceEstimate> monte_carlo_variance(const ContaminationConfig<Scalar>& config,
                                                   const WeightingScheme& scheme, long long replicates,
                                                   std::uint64_t seed, const MonteCarloOptions& options = {}) {
    config.validate();
    if (replicates < 2) throw ConfigError("monte_carlo_variance needs at least two replicates");
    if (scheme.max_t() < config.horizon) throw ConfigError("weighting scheme rows do not reach the horizon");

    const Eigen::Index d = config.dimension();
    const auto horizon = static_cast<std::size_t>(config.horizon);
    const long long batches = std::max<long long>(1, std::min<long long>(options.max_batches, replicates / 2));

    using Acc = MomentAccumulator<Scalar>;
    std::vector<std::vector<Acc>> per_batch(static_cast<std::size_t>(batches));

    parallel_for(static_cast<std::size_t>(batches), options.threads, [&](std::size_t b) {
        const long long begin = replicates * static_cast<long long>(b) / batches;
        const long long end = replicates * static_cast<long long>(b + 1) / batches;
        std::vector<Acc> accs(horizon, Acc(d));
        const GaussianSampler<Scalar> noise(config.sigma);
        Vector<Scalar> u(d);
        Vector<Scalar> x(d);
        for (long long r = begin; r < end; ++r) {
            RngStream rng = derive_stream(seed, stream_key(options.experiment, static_cast<std::uint64_t>(r)));
            EstimateStream<Scalar> estimate(scheme, d);
            const Vector<Scalar>* y = nullptr;
            for (std::size_t t = 0; t < horizon; ++t) {
                noise.draw(rng, u);
                if (t == 0) {
                    x = config.mu + u;
                } else {
                    x = config.alpha * (*y) + (1 - config.alpha) * config.mu + u;
                }
                y = &estimate.push(x);
                accs[t].push(*y);
            }
        }
        per_batch[b] = std::move(accs);
    });

    std::vector<VarianceEstimate> out(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        Acc total(d);
        MomentAccumulator<double> spread(1);
        for (const auto& batch : per_batch) {
            total.merge(batch[t]);
            if (batches >= 2) spread.push(static_cast<double>(batch[t].trace_variance().value()));
        }
        auto& est = out[t];
        est.t = static_cast<int>(t) + 1;
        est.trace_var = static_cast<double>(total.trace_variance().value());
        est.std_error = batches >= 2 ? std::sqrt(spread.trace_variance().value() / static_cast<double>(batches))
                                     : std::numeric_limits<double>::quiet_NaN();
        if (d <= 4) est.covariance = total.covariance().value().template cast<double>();
    }
    return out;
}

}  // namespace contam
