#include "contam/variance_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "contam/errors.hpp"

namespace contam {

namespace {

void check_domain(double alpha, int t, const char* op) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError(std::string(op) + ": alpha must lie in [0, 1]");
    if (t < 1) throw DomainError(std::string(op) + ": t must be positive");
}

double hat_gamma(double alpha, int l) { return 1.0 + static_cast<double>(l - 1) * (1.0 - alpha); }

}  // namespace

double gamma_ratio(double z, double lambda) { return std::exp(std::lgamma(z + 1.0) - std::lgamma(z + lambda)); }

VarianceFactor var_factor_uniform_closed(double alpha, int t) {
    check_domain(alpha, t, "var_factor_uniform_closed");
    VarianceFactor f{0.0, alpha, t, "uniform"};
    if (alpha == 0.0) {
        f.value = 1.0 / t;
        return f;
    }
    if (alpha == 1.0) {
        double sum = 0.0;
        for (int k = t; k >= 1; --k) sum += 1.0 / (static_cast<double>(k) * k);
        f.value = sum;
        return f;
    }
    // [G(t+a)/G(t+1)]^2 sum_k [G(k+1)/(k G(k+a))]^2, each term exponentiated on its own.
    const double log_lead = std::lgamma(t + alpha) - std::lgamma(t + 1.0);
    double sum = 0.0;
    for (int k = 1; k < t; ++k) {
        const double log_term = log_lead + std::lgamma(k + 1.0) - std::log(static_cast<double>(k)) - std::lgamma(k + alpha);
        sum += std::exp(2.0 * log_term);
    }
    f.value = 1.0 / (static_cast<double>(t) * t) + sum;
    return f;
}

VarianceFactor var_factor_uniform_recursive(double alpha, int t) {
    check_domain(alpha, t, "var_factor_uniform_recursive");
    double v = 1.0;
    for (int s = 2; s <= t; ++s) {
        const double m = (s - 1 + alpha) / s;
        v = m * m * v + 1.0 / (static_cast<double>(s) * s);
    }
    return {v, alpha, t, "uniform"};
}

SandwichBounds gautschi_sandwich(double alpha, int t) {
    if (t < 3) throw DomainError("gautschi_sandwich: t must be at least 3");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("gautschi_sandwich: alpha must lie in (0, 1)");
    const double td = t;
    const double bracket = 1.0 / td + 1.0 / (td * td) + std::pow(td, -2.0 * (1.0 - alpha));
    return {0.5 * bracket, 4.0 * bracket, alpha, t};
}

VarianceFactor var_factor_hat_closed(double alpha, int t) {
    check_domain(alpha, t, "var_factor_hat_closed");
    VarianceFactor f{1.0, alpha, t, "hat"};
    if (t == 1) return f;
    const double a1 = 1.0 - alpha;
    // log_c[l] = log C_l = sum_{i=1}^{l} log((g_i + a(1-a)) / g_{i+1}), log_c[0] = 0.
    std::vector<double> log_c(static_cast<std::size_t>(t), 0.0);
    for (int l = 1; l < t; ++l) {
        log_c[static_cast<std::size_t>(l)] =
            log_c[static_cast<std::size_t>(l - 1)] +
            std::log((hat_gamma(alpha, l) + alpha * a1) / hat_gamma(alpha, l + 1));
    }
    const double log_ct = log_c[static_cast<std::size_t>(t - 1)];
    const double lead = a1 / hat_gamma(alpha, t);
    double value = lead * lead;
    for (int k = 2; k <= t - 1; ++k) {
        const double ratio = std::exp(log_ct - log_c[static_cast<std::size_t>(k - 1)]);
        const double w = a1 / hat_gamma(alpha, k);
        value += ratio * ratio * w * w;
    }
    const double ct = std::exp(log_ct);
    value += ct * ct;
    f.value = value;
    return f;
}

VarianceFactor var_factor_hat_recursive(double alpha, int t) {
    check_domain(alpha, t, "var_factor_hat_recursive");
    const double a1 = 1.0 - alpha;
    double v = 1.0;
    for (int s = 2; s <= t; ++s) {
        const double g = hat_gamma(alpha, s);
        const double m = (hat_gamma(alpha, s - 1) + alpha * a1) / g;
        const double add = a1 / g;
        v = m * m * v + add * add;
    }
    return {v, alpha, t, "hat"};
}

AlphaStar find_alpha_star(int t, double grid_step) {
    if (t < 2) throw DomainError("find_alpha_star: t must be at least 2");
    if (!(grid_step > 0.0 && grid_step <= 0.05)) throw DomainError("find_alpha_star: grid_step must lie in (0, 0.05]");
    const auto points = static_cast<int>(std::ceil(1.0 / grid_step - 1e-9));
    AlphaStar star;
    star.grid_step = grid_step;
    star.t = t;
    star.value = 1.0;
    std::vector<CrossoverPoint> passing;
    for (int i = points; i >= 0; --i) {
        const double alpha = i == points ? 1.0 : i * grid_step;
        const double hat = var_factor_hat_closed(alpha, t).value;
        const double uni = var_factor_uniform_closed(alpha, t).value;
        if (!(hat < uni)) break;
        passing.push_back({alpha, hat, uni});
        star.value = alpha;
    }
    star.certificate.assign(passing.rbegin(), passing.rend());
    return star;
}

bool verify_alpha_star(const AlphaStar& star) {
    if (star.t < 2 || !(star.grid_step > 0.0 && star.grid_step <= 0.05)) return false;
    auto passes = [&](double alpha) {
        return var_factor_hat_closed(alpha, star.t).value < var_factor_uniform_closed(alpha, star.t).value;
    };
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
    if (star.certificate.empty()) return star.value == 1.0 && !passes(1.0);
    const auto points = static_cast<int>(std::ceil(1.0 / star.grid_step - 1e-9));
    std::size_t j = 0;
    bool below_checked = false;
    for (int i = 0; i <= points; ++i) {
        const double alpha = i == points ? 1.0 : i * star.grid_step;
        if (alpha < star.value - 1e-12) {
            // Minimality: the grid point just below the returned value must fail.
            if (i + 1 <= points) {
                const double next = i + 1 == points ? 1.0 : (i + 1) * star.grid_step;
                if (next >= star.value - 1e-12) {
                    if (passes(alpha)) return false;
                    below_checked = true;
                }
            }
            continue;
        }
        if (j >= star.certificate.size()) return false;
        const CrossoverPoint& p = star.certificate[j++];
        if (!same(p.alpha, alpha)) return false;
        const double hat = var_factor_hat_closed(alpha, star.t).value;
        const double uni = var_factor_uniform_closed(alpha, star.t).value;
        if (!same(p.hat, hat) || !same(p.uniform, uni) || !(hat < uni)) return false;
    }
    return j == star.certificate.size() && (below_checked || star.value == 0.0);
}

}  // namespace contam
