#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "contam/errors.hpp"
#include "contam/variance_oracle.hpp"

using namespace contam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// Reference values below come from exact rational arithmetic on the one-step
// recursions (Python fractions), independent of this library.

TEST_CASE("uniform factor worked values") {
    CHECK_THAT(var_factor_uniform_closed(0.0, 5).value, WithinAbs(0.2, 1e-15));
    CHECK_THAT(var_factor_uniform_closed(1.0, 3).value, WithinAbs(1.0 + 0.25 + 1.0 / 9.0, 1e-15));
    CHECK_THAT(var_factor_uniform_closed(0.5, 2).value, WithinRel(0.8125, 1e-12));
    CHECK_THAT(var_factor_uniform_closed(0.5, 3).value, WithinRel(0.6753472222222222, 1e-12));
    CHECK_THAT(var_factor_uniform_closed(0.5, 4).value, WithinRel(0.5795627170138888, 1e-12));
    CHECK_THAT(var_factor_uniform_closed(0.5, 10).value, WithinRel(0.3262581147882215, 1e-12));
    CHECK_THAT(var_factor_uniform_closed(0.25, 7).value, WithinRel(0.2317775655881018, 1e-12));

    CHECK(var_factor_uniform_recursive(0.0, 4).value == 0.25);
    CHECK(var_factor_uniform_recursive(1.0, 2).value == 1.25);
    CHECK(var_factor_uniform_recursive(0.5, 2).value == 0.8125);

    const auto f = var_factor_uniform_closed(0.3, 9);
    CHECK(f.alpha == 0.3);
    CHECK(f.t == 9);
    CHECK(f.scheme == "uniform");
}

TEST_CASE("hat factor worked values") {
    for (int t : {1, 2, 5, 50}) CHECK(var_factor_hat_closed(1.0, t).value == 1.0);
    CHECK_THAT(var_factor_hat_closed(0.0, 4).value, WithinRel(0.25, 1e-12));
    CHECK_THAT(var_factor_hat_recursive(0.0, 10).value, WithinRel(0.1, 1e-12));
    CHECK(var_factor_hat_recursive(1.0, 10).value == 1.0);
    CHECK_THAT(var_factor_hat_closed(0.5, 2).value, WithinRel(var_factor_hat_recursive(0.5, 2).value, 1e-12));
    CHECK_THAT(var_factor_hat_recursive(0.5, 3).value, WithinRel(var_factor_hat_closed(0.5, 3).value, 1e-12));
    CHECK_THAT(var_factor_hat_closed(0.5, 2).value, WithinRel(0.8055555555555556, 1e-12));
    CHECK_THAT(var_factor_hat_closed(0.5, 3).value, WithinRel(0.6792534722222222, 1e-12));
    CHECK_THAT(var_factor_hat_closed(0.5, 10).value, WithinRel(0.3432531497696341, 1e-12));
    CHECK_THAT(var_factor_hat_closed(0.25, 7).value, WithinRel(0.23618128384957834, 1e-12));
    CHECK(var_factor_hat_closed(0.5, 1).value == 1.0);
    CHECK(var_factor_hat_closed(0.5, 3).scheme == "hat");
}

TEST_CASE("closed forms agree with their recursions") {
    for (int i = 0; i <= 10; ++i) {
        const double alpha = i / 10.0;
        for (int t = 1; t <= 1000; ++t) {
            const double uc = var_factor_uniform_closed(alpha, t).value;
            const double ur = var_factor_uniform_recursive(alpha, t).value;
            const double hc = var_factor_hat_closed(alpha, t).value;
            const double hr = var_factor_hat_recursive(alpha, t).value;
            REQUIRE(std::abs(uc - ur) <= 1e-9 * ur);
            REQUIRE(std::abs(hc - hr) <= 1e-9 * hr);
        }
    }
}

TEST_CASE("factors stay finite and positive up to t = 10^4") {
    for (double alpha : {0.0, 0.01, 0.5, 0.99, 1.0}) {
        for (int t : {1, 10, 1000, 10000}) {
            const double u = var_factor_uniform_closed(alpha, t).value;
            const double h = var_factor_hat_closed(alpha, t).value;
            CHECK(std::isfinite(u));
            CHECK(std::isfinite(h));
            CHECK(u > 0.0);
            CHECK(h > 0.0);
        }
    }
}

TEST_CASE("edge cases route to the exact forms") {
    double partial = 0.0;
    for (int t = 1; t <= 1000; ++t) {
        partial += 1.0 / (static_cast<double>(t) * t);
        CHECK(std::abs(var_factor_uniform_closed(0.0, t).value - 1.0 / t) <= 1e-12);
        CHECK(std::abs(var_factor_uniform_closed(1.0, t).value - partial) <= 1e-12);
    }
}

TEST_CASE("alpha = 1 increases toward pi^2/6") {
    const double limit = std::numbers::pi * std::numbers::pi / 6.0;
    double prev = 0.0;
    for (int t = 1; t <= 10000; ++t) {
        const double v = var_factor_uniform_closed(1.0, t).value;
        REQUIRE(v > prev);
        REQUIRE(v <= limit);
        prev = v;
    }
    CHECK(limit - prev <= 1e-4);
}

TEST_CASE("sandwich bounds") {
    const auto b = gautschi_sandwich(0.5, 4);
    CHECK_THAT(b.lower, WithinAbs(0.28125, 1e-15));
    CHECK_THAT(b.upper, WithinAbs(2.25, 1e-15));
    const double v = var_factor_uniform_closed(0.5, 4).value;
    CHECK(b.lower <= v);
    CHECK(v <= b.upper);

    for (double alpha : {0.05, 0.3, 0.77}) {
        for (int t : {3, 17, 900}) {
            const auto s = gautschi_sandwich(alpha, t);
            CHECK_THAT(s.upper, WithinRel(8.0 * s.lower, 1e-15));
        }
    }

    CHECK_THROWS_AS(gautschi_sandwich(0.5, 2), DomainError);
    CHECK_THROWS_AS(gautschi_sandwich(0.0, 10), DomainError);
    CHECK_THROWS_AS(gautschi_sandwich(1.0, 10), DomainError);
}

TEST_CASE("sandwich holds on the grid") {
    int violations = 0;
    for (int i = 1; i <= 19; ++i) {
        const double alpha = i * 0.05;
        for (int t = 3; t <= 1000; ++t) {
            const auto s = gautschi_sandwich(alpha, t);
            const double v = var_factor_uniform_closed(alpha, t).value;
            if (!(s.lower <= v && v <= s.upper)) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("gautschi inequality self-test") {
    for (double z : {0.5, 1.0, 2.0, 10.0, 100.0, 1000.0}) {
        for (double lambda : {0.1, 0.5, 0.9}) {
            const double r = gamma_ratio(z, lambda);
            CHECK(std::pow(z, 1.0 - lambda) <= r);
            CHECK(r <= std::pow(z + 1.0, 1.0 - lambda));
        }
    }
    CHECK_THAT(gamma_ratio(1.0, 0.5), WithinRel(std::exp(std::lgamma(2.0) - std::lgamma(1.5)), 1e-14));
}

namespace {

double loglog_slope(double alpha) {
    // Least squares of log v against log t on a geometric grid over [10^2, 10^4].
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int i = 0; i <= 200; ++i) {
        const int t = static_cast<int>(std::lround(std::pow(10.0, 2.0 + 2.0 * i / 200.0)));
        const double x = std::log(static_cast<double>(t));
        const double y = std::log(var_factor_uniform_closed(alpha, t).value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_CASE("decay rate changes at one half") {
    CHECK_THAT(loglog_slope(0.25), WithinAbs(-1.0, 0.1));
    CHECK_THAT(loglog_slope(0.75), WithinAbs(-0.5, 0.1));
}

TEST_CASE("hat weighting beats uniform at alpha = 1") {
    for (int t = 2; t <= 1000; ++t) {
        REQUIRE(var_factor_hat_closed(1.0, t).value < var_factor_uniform_closed(1.0, t).value);
    }
    // Both reduce to plain averaging when alpha = 0.
    CHECK_THAT(var_factor_hat_closed(0.0, 37).value, WithinRel(var_factor_uniform_closed(0.0, 37).value, 1e-12));
}

TEST_CASE("alpha star grid scan") {
    const auto star10 = find_alpha_star(10, 0.01);
    CHECK(star10.value > 0.0);
    CHECK(star10.value < 1.0);
    CHECK_THAT(star10.value, WithinAbs(0.73, 1e-9));
    CHECK(verify_alpha_star(star10));
    CHECK(var_factor_hat_closed(1.0, 10).value < var_factor_uniform_closed(1.0, 10).value);

    const auto star2 = find_alpha_star(2, 0.01);
    CHECK_THAT(star2.value, WithinAbs(0.43, 1e-9));
    CHECK(verify_alpha_star(star2));
    for (const auto& p : star2.certificate) {
        CHECK(p.alpha >= star2.value - 1e-12);
        CHECK(var_factor_hat_closed(p.alpha, 2).value < var_factor_uniform_closed(p.alpha, 2).value);
    }

    CHECK_THAT(find_alpha_star(3, 0.01).value, WithinAbs(0.54, 1e-9));
    CHECK_THAT(find_alpha_star(100, 0.01).value, WithinAbs(0.82, 1e-9));

    auto tampered = star10;
    tampered.certificate.front().hat = tampered.certificate.front().uniform + 1.0;
    CHECK_FALSE(verify_alpha_star(tampered));
}

TEST_CASE("alpha star certificate must be minimal and complete") {
    auto star = find_alpha_star(10, 0.05);
    REQUIRE(verify_alpha_star(star));

    auto truncated = star;
    truncated.certificate.pop_back();
    CHECK_FALSE(verify_alpha_star(truncated));

    // Claiming a larger value hides a passing point below it.
    auto shifted = star;
    shifted.value += 0.05;
    shifted.certificate.erase(shifted.certificate.begin());
    CHECK_FALSE(verify_alpha_star(shifted));

    AlphaStar none;
    none.t = 10;
    none.grid_step = 0.05;
    CHECK_FALSE(verify_alpha_star(none));

    CHECK_THROWS_AS(find_alpha_star(1, 0.01), DomainError);
    CHECK_THROWS_AS(find_alpha_star(10, 0.1), DomainError);
    CHECK_THROWS_AS(find_alpha_star(10, 0.0), DomainError);
}
