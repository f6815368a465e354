#include "contam/random_walk.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "contam/errors.hpp"

namespace contam {

void WalkConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("walk alpha must lie in [0, 1]");
    if (truncation < 1) throw ConfigError("walk truncation must be at least 1");
    if (replicates < 1) throw ConfigError("walk replicates must be at least 1");
}

bool walk_stays_positive(double alpha, long long truncation, RngStream& rng) {
    const BernoulliThreshold up(alpha);
    long long level = 0;
    for (long long step = 0; step < truncation; ++step) {
        level += up.accept(rng()) ? 1 : -1;
        if (level < 1) return false;
        // Too high to reach 0 in the steps left.
        if (level > truncation - step - 1) return true;
    }
    return true;
}

CStarEstimate estimate_c_star(const WalkConfig& config, std::uint64_t seed, const WalkOptions& options) {
    config.validate();
    constexpr long long kChunk = 4096;
    const long long chunks = (config.replicates + kChunk - 1) / kChunk;
    std::vector<long long> hits(static_cast<std::size_t>(chunks), 0);
    parallel_for(static_cast<std::size_t>(chunks), options.threads, [&](std::size_t c) {
        const long long begin = static_cast<long long>(c) * kChunk;
        const long long end = std::min(config.replicates, begin + kChunk);
        long long count = 0;
        for (long long r = begin; r < end; ++r) {
            RngStream rng = derive_stream(seed, stream_key(options.experiment, static_cast<std::uint64_t>(r)));
            count += walk_stays_positive(config.alpha, config.truncation, rng) ? 1 : 0;
        }
        hits[c] = count;
    });
    CStarEstimate est;
    est.replicates = config.replicates;
    est.positives = std::accumulate(hits.begin(), hits.end(), 0LL);
    const auto r = static_cast<double>(config.replicates);
    est.estimate = static_cast<double>(est.positives) / r;
    est.ci_halfwidth = 1.959963984540054 * std::sqrt(est.estimate * (1.0 - est.estimate) / r);
    return est;
}

}  // namespace contam
