#pragma once

#include <cstdint>

#include "contam/parallel.hpp"
#include "contam/rng.hpp"

namespace contam {

struct WalkConfig {
    double alpha = 0.5;             // up-step probability
    long long truncation = 100000;  // steps simulated before declaring "stays positive"
    long long replicates = 10000;

    void validate() const;
};

/// W_0 = 0, +1 w.p. alpha, -1 otherwise; true iff W_t >= 1 for every 1 <= t <= truncation.
bool walk_stays_positive(double alpha, long long truncation, RngStream& rng);

struct CStarEstimate {
    double estimate = 0.0;
    double ci_halfwidth = 0.0;  // normal-approximation 95%
    long long positives = 0;
    long long replicates = 0;

    double lower() const { return estimate - ci_halfwidth; }
    double upper() const { return estimate + ci_halfwidth; }
};

struct WalkOptions {
    unsigned threads = default_thread_count();
    std::uint64_t experiment = 0;
};

/// Monte Carlo estimate of Pr[W_t >= 1 for all t >= 1]; truncation biases it upward.
CStarEstimate estimate_c_star(const WalkConfig& config, std::uint64_t seed, const WalkOptions& options = {});

}  // namespace contam
