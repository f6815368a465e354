#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>

#include "contam/rng.hpp"

namespace contam {

using Label = std::uint8_t;

enum class Orientation { Ascending, Descending };

/**
 * Classifier over the real line with labels in {0, 1}.
 *
 * Threshold(theta, Ascending) predicts 1 iff x > theta; Descending predicts 1 iff
 * x <= theta. UniformRandom ignores x and consumes one random bit per prediction.
 * XorPair predicts base(x) XOR delta(x); nodes are immutable and shared.
 */
class Hypothesis {
public:
    struct Threshold {
        double theta;
        Orientation orientation;
    };
    struct ConstantZero {};
    struct ConstantOne {};
    struct UniformRandom {};
    struct XorPair {
        std::shared_ptr<const Hypothesis> base;
        std::shared_ptr<const Hypothesis> delta;
    };
    using Variant = std::variant<Threshold, ConstantZero, ConstantOne, UniformRandom, XorPair>;

    static Hypothesis threshold(double theta, Orientation orientation) { return Hypothesis(Threshold{theta, orientation}); }
    static Hypothesis constant_zero() { return Hypothesis(ConstantZero{}); }
    static Hypothesis constant_one() { return Hypothesis(ConstantOne{}); }
    static Hypothesis uniform_random() { return Hypothesis(UniformRandom{}); }
    static Hypothesis xor_pair(Hypothesis base, Hypothesis delta);

    const Variant& variant() const { return value_; }

    bool is_threshold() const { return std::holds_alternative<Threshold>(value_); }
    bool is_uniform_random() const { return std::holds_alternative<UniformRandom>(value_); }
    bool is_xor() const { return std::holds_alternative<XorPair>(value_); }
    bool is_deterministic() const;

    const Threshold& as_threshold() const { return std::get<Threshold>(value_); }
    const XorPair& as_xor() const { return std::get<XorPair>(value_); }

    std::string describe() const;

    friend bool operator==(const Hypothesis& a, const Hypothesis& b);

private:
    explicit Hypothesis(Variant v) : value_(std::move(v)) {}

    Variant value_;
};

/// Deterministic prediction; throws ProtocolError for hypotheses that need randomness.
Label predict(const Hypothesis& h, double x);

Label predict(const Hypothesis& h, double x, RngStream& rng);

/// a XOR b, cancelling a shared operand: (g ^ f) ^ g == f.
Hypothesis operator^(const Hypothesis& a, const Hypothesis& b);

}  // namespace contam
