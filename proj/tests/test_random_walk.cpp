#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "contam/errors.hpp"
#include "contam/random_walk.hpp"

using namespace contam;
using Catch::Matchers::WithinAbs;

// Oracle used throughout: for alpha > 1/2 the probability of never returning to
// zero is 2 alpha - 1 (gambler's ruin against an infinitely rich opponent).
namespace {

double ruin_oracle(double alpha) { return alpha > 0.5 ? 2.0 * alpha - 1.0 : 0.0; }

}  // namespace

TEST_CASE("degenerate walks") {
    auto rng = derive_stream(1, 0);
    for (int i = 0; i < 100; ++i) {
        CHECK(walk_stays_positive(1.0, 1000, rng));
        CHECK_FALSE(walk_stays_positive(0.0, 1000, rng));
    }
    // A single up-step survives a truncation of one.
    CHECK(walk_stays_positive(1.0, 1, rng));
}

TEST_CASE("walk config validation") {
    CHECK_THROWS_AS((WalkConfig{1.5, 10, 10}.validate()), ConfigError);
    CHECK_THROWS_AS((WalkConfig{0.5, 0, 10}.validate()), ConfigError);
    CHECK_THROWS_AS((WalkConfig{0.5, 10, 0}.validate()), ConfigError);
    CHECK_NOTHROW((WalkConfig{0.5, 1, 1}.validate()));
}

TEST_CASE("survival rate at alpha = 0.75") {
    const long long reps = 100000;
    long long hits = 0;
    for (long long r = 0; r < reps; ++r) {
        auto rng = derive_stream(31, static_cast<std::uint64_t>(r));
        hits += walk_stays_positive(0.75, 100000, rng);
    }
    CHECK_THAT(static_cast<double>(hits) / reps, WithinAbs(ruin_oracle(0.75), 0.02));
}

TEST_CASE("estimate_c_star worked values") {
    const auto fair = estimate_c_star({0.5, 1000000, 10000}, 2);
    CHECK(fair.estimate <= 0.02);

    const auto high = estimate_c_star({0.9, 100000, 100000}, 3);
    CHECK_THAT(high.estimate, WithinAbs(0.8, 0.01));
    CHECK(high.lower() > 0.0);

    const auto low = estimate_c_star({0.6, 100000, 100000}, 4);
    CHECK_THAT(low.estimate, WithinAbs(0.2, 0.01));
    CHECK(low.lower() > 0.0);

    const double p = low.estimate;
    CHECK_THAT(low.ci_halfwidth, WithinAbs(1.959963984540054 * std::sqrt(p * (1 - p) / 100000), 1e-15));
    CHECK(low.positives == std::llround(p * 100000));
    CHECK(low.replicates == 100000);
}

TEST_CASE("estimates are nondecreasing in alpha") {
    std::vector<CStarEstimate> est;
    for (int i = 0; i <= 8; ++i) {
        WalkConfig config{0.55 + 0.05 * i, 20000, 10000};
        WalkOptions options;
        options.experiment = static_cast<std::uint64_t>(i);
        est.push_back(estimate_c_star(config, 5, options));
    }
    for (std::size_t i = 1; i < est.size(); ++i) {
        INFO("alpha index " << i);
        CHECK(est[i].estimate >= est[i - 1].estimate - 2.0 * (est[i].ci_halfwidth + est[i - 1].ci_halfwidth));
    }
}

TEST_CASE("truncation at 10^5 and 10^6 agree") {
    for (double alpha : {0.6, 0.75, 0.9}) {
        // Same seed and replicate streams at both truncations.
        const auto shorter = estimate_c_star({alpha, 100000, 2000}, 6);
        const auto longer = estimate_c_star({alpha, 1000000, 2000}, 6);
        INFO("alpha " << alpha);
        CHECK(std::abs(shorter.estimate - longer.estimate) < 0.01);
        CHECK(shorter.estimate >= longer.estimate);
    }
}

TEST_CASE("estimates do not depend on the thread count") {
    WalkOptions one{1, 0};
    WalkOptions many{4, 0};
    const auto a = estimate_c_star({0.7, 5000, 20000}, 8, one);
    const auto b = estimate_c_star({0.7, 5000, 20000}, 8, many);
    CHECK(a.positives == b.positives);
}
