#pragma once

#include <string>
#include <vector>

namespace contam {

/// Scalar v with Var(Y_t) = v * Sigma.
struct VarianceFactor {
    double value = 0.0;
    double alpha = 0.0;
    int t = 1;
    std::string scheme;  // "uniform" or "hat"
};

struct SandwichBounds {
    double lower = 0.0;
    double upper = 0.0;
    double alpha = 0.0;
    int t = 3;
};

/// Gamma-function closed form for uniform weighting, evaluated in log space.
/// alpha = 0 and alpha = 1 return 1/t and sum_{k<=t} 1/k^2 exactly.
VarianceFactor var_factor_uniform_closed(double alpha, int t);

/// V_1 = 1, V_t = ((t-1+alpha)/t)^2 V_{t-1} + 1/t^2.
VarianceFactor var_factor_uniform_recursive(double alpha, int t);

/// lower = B/2, upper = 4B with B = 1/t + 1/t^2 + t^{-2(1-alpha)}; needs t >= 3, 0 < alpha < 1.
SandwichBounds gautschi_sandwich(double alpha, int t);

/// Closed form for the first-round-upweighted scheme (products C_l accumulated in log space).
VarianceFactor var_factor_hat_closed(double alpha, int t);

/// V_1 = 1, V_t = [(g_{t-1} + alpha(1-alpha)) / g_t]^2 V_{t-1} + ((1-alpha)/g_t)^2,
/// g_l = 1 + (l-1)(1-alpha).
VarianceFactor var_factor_hat_recursive(double alpha, int t);

/// exp(lgamma(z+1) - lgamma(z+lambda)).
double gamma_ratio(double z, double lambda);

struct CrossoverPoint {
    double alpha = 0.0;
    double hat = 0.0;
    double uniform = 0.0;
};

struct AlphaStar {
    double value = 1.0;
    double grid_step = 0.0;
    int t = 2;
    /// Every grid point alpha >= value with both factors; each has hat < uniform
    /// (when value == 1 and the predicate fails at 1, the certificate is empty).
    std::vector<CrossoverPoint> certificate;
};

/**
 * Smallest grid point a such that the hat factor is strictly below the uniform factor
 * at every grid alpha in [a, 1]. Returns 1 when no such point below 1 exists.
 */
AlphaStar find_alpha_star(int t, double grid_step);

/// Re-evaluates both closed forms at every certificate point.
bool verify_alpha_star(const AlphaStar& star);

}  // namespace contam
