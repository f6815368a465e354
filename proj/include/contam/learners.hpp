#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contam/hypothesis.hpp"
#include "contam/pac_env.hpp"

namespace contam {

// ---------------------------------------------------------------------------
// Empirical risk minimization over thresholds (both orientations).
//
// Candidate boundaries are the midpoints between consecutive distinct sample
// values plus -inf and +inf. Ties on the objective go to the smaller boundary,
// then to the ascending orientation.
// ---------------------------------------------------------------------------

/// Fewest disagreements with the sample labels.
Hypothesis erm_noisy(const LabelHistogram& data);
Hypothesis erm_noisy(std::span<const LabeledPoint> data);

/// Widest separating gap when the sample is separable, erm_noisy otherwise.
Hypothesis erm_maxmargin(const LabelHistogram& data);
Hypothesis erm_maxmargin(std::span<const LabeledPoint> data);

long long count_disagreements(const Hypothesis& h, const LabelHistogram& data);

// ---------------------------------------------------------------------------
// Positive-unlabeled learning over XOR classes induced by thresholds.
// ---------------------------------------------------------------------------

/// Either all intervals / co-intervals, or g XOR {thresholds} for a fixed g.
class PuClass {
public:
    static PuClass interval_xor() { return PuClass(std::nullopt); }
    static PuClass anchored(Hypothesis g) { return PuClass(std::move(g)); }

    const std::optional<Hypothesis>& anchor() const { return anchor_; }

private:
    explicit PuClass(std::optional<Hypothesis> anchor) : anchor_(std::move(anchor)) {}
    std::optional<Hypothesis> anchor_;
};

/**
 * Exhaustive PU search: the returned hypothesis predicts 1 on every positive and,
 * among those, on the fewest unlabeled points; remaining ties go to the
 * lexicographically smallest boundaries. Boundaries are midpoints of the sorted
 * union of inputs plus -inf/+inf.
 */
Hypothesis pu_learn(std::span<const double> positives, std::span<const double> unlabeled, const PuClass& cls);

// ---------------------------------------------------------------------------
// Epoch learner.
// ---------------------------------------------------------------------------

struct LearnerParams {
    int d_vc = 1;
    int n = 1;
    double alpha = 0.0;  // known contamination rate, < 1
    double c_p = 1.0;
    double c_u = 1.0;
    double c_r = 1.0;

    void validate() const;

    /// Reads c_p, c_u, c_r (and optionally d_vc) from a `key = value` file.
    static LearnerParams with_constants(const std::filesystem::path& file, int n, double alpha);
    /// Constants from the checked-in default file.
    static LearnerParams defaults(int n, double alpha);
};

struct EpochSchedule {
    double epsilon = 0.0;         // target error 2^{-k} for the next epoch
    double delta = 0.0;           // failure probability, equal to epsilon
    long long p = 0;              // positives needed
    long long u = 0;              // unlabeled points needed
    long long required = 0;       // r_k, buffer size
    long long rounds = 0;         // ceil(r_k / n)
};

/// Epoch sizes for epoch k; alpha = 1 is unsupported.
EpochSchedule epoch_schedule(const LearnerParams& params, int k);

struct EpochState {
    int k = 1;
    Hypothesis g = Hypothesis::constant_zero();
    double epsilon_next = 0.5;
    long long rounds_remaining = 0;
    std::vector<LabeledPoint> buffer;
    long long p_target = 0;
    long long u_target = 0;
    double delta = 0.5;
    bool updated = false;  // whether the last transition ran the PU learner
};

EpochState begin_epoch(const LearnerParams& params, int k, Hypothesis g);

/**
 * Closes a finished epoch: flips buffer labels by g_k, takes positives from the
 * first m points and the last u_k points as unlabeled, and either learns the
 * disagreement region (g_{k+1} = h XOR g_k) or keeps g_k. Returns epoch k+1.
 */
EpochState epoch_update(const EpochState& state, const LearnerParams& params);

// ---------------------------------------------------------------------------
// Learners usable with run_recursive.
// ---------------------------------------------------------------------------

/// Probability of deploying UniformRandom at round t.
double uniform_mixing_probability(int n, int t);

class MaxMarginErmLearner final : public Learner {
public:
    std::string name() const override { return "erm_maxmargin"; }
    Hypothesis fit(const Dataset& data, std::span<const Hypothesis> history, RngStream& rng) override;
};

class NoisyErmLearner final : public Learner {
public:
    std::string name() const override { return "erm_noisy_repeated"; }
    Hypothesis fit(const Dataset& data, std::span<const Hypothesis> history, RngStream& rng) override;
};

/// Deploys UniformRandom with probability 1/sqrt(n(t+1)); otherwise noisy ERM on
/// round 0 plus every round labeled after a UniformRandom deployment.
class UniformMixingLearner final : public Learner {
public:
    std::string name() const override { return "uniform_mixing"; }
    Hypothesis fit(const Dataset& data, std::span<const Hypothesis> history, RngStream& rng) override;
    bool in_class(const Hypothesis& h) const override { return h.is_threshold() || h.is_uniform_random(); }

    const LabelHistogram& selected() const { return selected_; }

private:
    LabelHistogram selected_;
    std::size_t processed_rounds_ = 0;
};

/// Known-alpha epoch learner: f_0 is max-margin ERM, later hypotheses change only at epoch ends.
class EpochPuLearner final : public Learner {
public:
    explicit EpochPuLearner(LearnerParams params) : params_(params) { params_.validate(); }

    std::string name() const override { return "epoch_pu"; }
    Hypothesis fit(const Dataset& data, std::span<const Hypothesis> history, RngStream& rng) override;

    const EpochState& state() const { return state_; }

private:
    LearnerParams params_;
    EpochState state_;
};

/// `erm_maxmargin`, `erm_noisy_repeated`, `uniform_mixing` or `epoch_pu`.
std::unique_ptr<Learner> make_learner(const std::string& name, const LearnerParams& params);

const std::vector<std::string>& learner_names();

/// Deploys ConstantZero then ConstantOne for one round each and compares the counts of 1-labels.
double estimate_alpha(const Environment& env, int n, RngStream& rng);

}  // namespace contam
