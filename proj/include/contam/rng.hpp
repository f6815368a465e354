#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace contam {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64(s);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

/// Stream identifier for replicate `replicate` of experiment cell `experiment`.
constexpr std::uint64_t stream_key(std::uint64_t experiment, std::uint64_t replicate) {
    return detail::mix64(detail::mix64(experiment) ^ (replicate + 0x632BE59BD9B4E019ULL));
}

/// Precomputed acceptance threshold for Bernoulli(p) draws from raw 64-bit words.
class BernoulliThreshold {
public:
    explicit BernoulliThreshold(double p) {
        if (!(p > 0.0)) {
            mode_ = Mode::Never;
        } else if (p >= 1.0) {
            mode_ = Mode::Always;
        } else {
            mode_ = Mode::Compare;
            threshold_ = static_cast<std::uint64_t>(std::ldexp(p, 64));
        }
    }

    bool accept(std::uint64_t word) const {
        switch (mode_) {
            case Mode::Never: return false;
            case Mode::Always: return true;
            default: return word < threshold_;
        }
    }

private:
    enum class Mode { Never, Always, Compare };
    Mode mode_ = Mode::Never;
    std::uint64_t threshold_ = 0;
};

/**
 * Reproducible random stream (xoshiro256** state seeded through SplitMix64).
 *
 * A stream is fully determined by (seed, stream_id). Streams own their state, so
 * replicates running on different threads never share anything mutable. Satisfies
 * UniformRandomBitGenerator and can drive the standard <random> distributions.
 */
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
        std::uint64_t sm = detail::mix64(seed ^ detail::mix64(stream_id ^ 0xD1B54A32D192ED03ULL));
        for (auto& word : s_) word = detail::splitmix64(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = detail::rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl(s_[3], 45);
        return result;
    }

    /// Uniform double on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return BernoulliThreshold(p).accept((*this)()); }

    bool bit() { return ((*this)() >> 63) != 0; }

    double normal() { return normal_(*this); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> s_{};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline RngStream derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return RngStream(seed, stream_id);
}

}  // namespace contam
