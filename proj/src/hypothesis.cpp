#include "contam/hypothesis.hpp"

#include <sstream>

#include "contam/errors.hpp"
#include "contam/io.hpp"

namespace contam {

Hypothesis Hypothesis::xor_pair(Hypothesis base, Hypothesis delta) {
    return Hypothesis(XorPair{std::make_shared<const Hypothesis>(std::move(base)),
                              std::make_shared<const Hypothesis>(std::move(delta))});
}

bool Hypothesis::is_deterministic() const {
    if (is_uniform_random()) return false;
    if (is_xor()) return as_xor().base->is_deterministic() && as_xor().delta->is_deterministic();
    return true;
}

std::string Hypothesis::describe() const {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Threshold>) {
                return std::string(v.orientation == Orientation::Ascending ? "asc(" : "desc(") +
                       format_real(v.theta) + ")";
            } else if constexpr (std::is_same_v<T, ConstantZero>) {
                return "zero";
            } else if constexpr (std::is_same_v<T, ConstantOne>) {
                return "one";
            } else if constexpr (std::is_same_v<T, UniformRandom>) {
                return "uniform";
            } else {
                return "xor(" + v.base->describe() + "," + v.delta->describe() + ")";
            }
        },
        value_);
}

bool operator==(const Hypothesis& a, const Hypothesis& b) {
    if (a.value_.index() != b.value_.index()) return false;
    if (a.is_threshold()) {
        const auto& x = a.as_threshold();
        const auto& y = b.as_threshold();
        return x.theta == y.theta && x.orientation == y.orientation;
    }
    if (a.is_xor()) {
        return *a.as_xor().base == *b.as_xor().base && *a.as_xor().delta == *b.as_xor().delta;
    }
    return true;
}

namespace {

template <typename BitSource>
Label evaluate(const Hypothesis& h, double x, BitSource&& bit) {
    return std::visit(
        [&](const auto& v) -> Label {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Hypothesis::Threshold>) {
                const bool above = x > v.theta;
                return v.orientation == Orientation::Ascending ? above : !above;
            } else if constexpr (std::is_same_v<T, Hypothesis::ConstantZero>) {
                return 0;
            } else if constexpr (std::is_same_v<T, Hypothesis::ConstantOne>) {
                return 1;
            } else if constexpr (std::is_same_v<T, Hypothesis::UniformRandom>) {
                return bit();
            } else {
                return evaluate(*v.base, x, bit) ^ evaluate(*v.delta, x, bit);
            }
        },
        h.variant());
}

}  // namespace

Label predict(const Hypothesis& h, double x) {
    return evaluate(h, x, []() -> Label {
        throw ProtocolError("deterministic prediction requested from a randomized hypothesis");
    });
}

Label predict(const Hypothesis& h, double x, RngStream& rng) {
    return evaluate(h, x, [&rng]() -> Label { return rng.bit() ? 1 : 0; });
}

Hypothesis operator^(const Hypothesis& a, const Hypothesis& b) {
    if (a.is_xor()) {
        if (*a.as_xor().base == b) return *a.as_xor().delta;
        if (*a.as_xor().delta == b) return *a.as_xor().base;
    }
    if (b.is_xor()) {
        if (*b.as_xor().base == a) return *b.as_xor().delta;
        if (*b.as_xor().delta == a) return *b.as_xor().base;
    }
    return Hypothesis::xor_pair(a, b);
}

}  // namespace contam
