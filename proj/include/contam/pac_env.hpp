#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "contam/hypothesis.hpp"
#include "contam/rng.hpp"

namespace contam {

struct Atom {
    double x;
    double p;
};

/// Finite-support distribution on the line; probabilities positive and summing to one.
class DiscreteDistribution {
public:
    explicit DiscreteDistribution(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double sample(RngStream& rng) const;

private:
    std::vector<Atom> atoms_;
    std::vector<double> cumulative_;
};

/// Atoms -1, 0, +1 with masses 1/2 - 1/(2n), 1/n, 1/2 - 1/(2n); requires n >= 2.
DiscreteDistribution hard_distribution(int n);

/// Target concept of the hard instance: predicts 1 iff x > -1 (labels 0 and +1 as 1).
Hypothesis hard_target();

/// Exact disagreement mass Pr_x[f(x) != f_star(x)]; a UniformRandom f has loss 1/2.
double true_loss(const Hypothesis& f, const DiscreteDistribution& dist, const Hypothesis& f_star);

enum class Origin : std::uint8_t { Nature, Model };

struct LabeledExample {
    double x;
    Label y;
    Origin origin;  // diagnostics only, never shown to learners
};

/// Learner-facing example: no origin.
struct LabeledPoint {
    double x;
    Label y;
};

/// n examples: x ~ dist; label from f_prev with probability alpha, else from f_star.
std::vector<LabeledExample> sample_round(const DiscreteDistribution& dist, const Hypothesis& f_prev,
                                         const Hypothesis& f_star, double alpha, int n, RngStream& rng);

/// Per-distinct-x label counts, sorted by x.
class LabelHistogram {
public:
    struct Entry {
        double x;
        std::array<long long, 2> counts;
    };

    void add(double x, Label y);
    void add(std::span<const LabeledPoint> points);

    std::vector<Entry> entries() const;
    long long total() const { return total_; }
    bool empty() const { return total_ == 0; }

private:
    std::map<double, std::array<long long, 2>> counts_;
    long long total_ = 0;
};

/**
 * Cumulative dataset seen by a learner at round t: rounds 0..t in order with
 * multiplicity, plus a running label histogram.
 */
class Dataset {
public:
    void append_round(std::span<const LabeledExample> examples);

    std::size_t rounds() const { return offsets_.size(); }
    std::size_t size() const { return points_.size(); }
    std::span<const LabeledPoint> points() const { return points_; }
    std::span<const LabeledPoint> round(std::size_t r) const;
    const LabelHistogram& histogram() const { return histogram_; }

private:
    std::vector<LabeledPoint> points_;
    std::vector<std::size_t> offsets_;
    LabelHistogram histogram_;
};

/// A (possibly stateful, possibly randomized) learning algorithm; one instance per run.
class Learner {
public:
    virtual ~Learner() = default;

    virtual std::string name() const = 0;

    /// f_t from the cumulative data (rounds 0..t) and f_0..f_{t-1}.
    virtual Hypothesis fit(const Dataset& data, std::span<const Hypothesis> history, RngStream& rng) = 0;

    /// Hypotheses this learner is allowed to emit; thresholds by default.
    virtual bool in_class(const Hypothesis& h) const { return h.is_threshold(); }
};

struct RunRecord {
    std::string learner;
    double alpha = 0.0;
    int n = 0;
    int t = 0;
    double loss = 0.0;
    long long replicate = 0;
};

struct Environment {
    DiscreteDistribution dist;
    Hypothesis f_star;
    double alpha = 0.0;
};

/**
 * Recursive learning loop: round 0 is labeled by f_star only, each later round by
 * f_{t-1} with probability alpha. One record per round t = 0..horizon with the exact loss.
 * If `trace` is given it receives every example with its origin, in order.
 */
std::vector<RunRecord> run_recursive(const DiscreteDistribution& dist, const Hypothesis& f_star, double alpha, int n,
                                     int horizon, Learner& learner, RngStream& rng, long long replicate = 0,
                                     std::vector<LabeledExample>* trace = nullptr);

}  // namespace contam
