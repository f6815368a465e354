#include "contam/pac_env.hpp"

#include <algorithm>
#include <cmath>

#include "contam/errors.hpp"

namespace contam {

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw ConfigError("distribution needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (!(a.p > 0.0)) throw ConfigError("atom probabilities must be positive");
        total += a.p;
        cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("atom probabilities must sum to 1");
}

double DiscreteDistribution::sample(RngStream& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), atoms_.size() - 1);
    return atoms_[idx].x;
}

DiscreteDistribution hard_distribution(int n) {
    if (n < 2) throw DomainError("hard_distribution: n must be at least 2");
    const double side = 0.5 - 0.5 / n;
    return DiscreteDistribution({{-1.0, side}, {0.0, 1.0 / n}, {1.0, side}});
}

Hypothesis hard_target() { return Hypothesis::threshold(-1.0, Orientation::Ascending); }

double true_loss(const Hypothesis& f, const DiscreteDistribution& dist, const Hypothesis& f_star) {
    if (f.is_uniform_random()) return 0.5;
    double loss = 0.0;
    for (const auto& a : dist.atoms()) {
        if (predict(f, a.x) != predict(f_star, a.x)) loss += a.p;
    }
    return std::min(1.0, loss);
}

std::vector<LabeledExample> sample_round(const DiscreteDistribution& dist, const Hypothesis& f_prev,
                                         const Hypothesis& f_star, double alpha, int n, RngStream& rng) {
    const BernoulliThreshold from_model(alpha);
    std::vector<LabeledExample> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) {
        const double x = dist.sample(rng);
        if (from_model.accept(rng())) {
            out.push_back({x, predict(f_prev, x, rng), Origin::Model});
        } else {
            out.push_back({x, predict(f_star, x, rng), Origin::Nature});
        }
    }
    return out;
}

void LabelHistogram::add(double x, Label y) {
    ++counts_[x][y ? 1 : 0];
    ++total_;
}

void LabelHistogram::add(std::span<const LabeledPoint> points) {
    for (const auto& p : points) add(p.x, p.y);
}

std::vector<LabelHistogram::Entry> LabelHistogram::entries() const {
    std::vector<Entry> out;
    out.reserve(counts_.size());
    for (const auto& [x, c] : counts_) out.push_back({x, c});
    return out;
}

void Dataset::append_round(std::span<const LabeledExample> examples) {
    offsets_.push_back(points_.size());
    for (const auto& e : examples) {
        points_.push_back({e.x, e.y});
        histogram_.add(e.x, e.y);
    }
}

std::span<const LabeledPoint> Dataset::round(std::size_t r) const {
    if (r >= offsets_.size()) throw std::out_of_range("Dataset::round");
    const std::size_t begin = offsets_[r];
    const std::size_t end = r + 1 < offsets_.size() ? offsets_[r + 1] : points_.size();
    return std::span<const LabeledPoint>(points_).subspan(begin, end - begin);
}

std::vector<RunRecord> run_recursive(const DiscreteDistribution& dist, const Hypothesis& f_star, double alpha, int n,
                                     int horizon, Learner& learner, RngStream& rng, long long replicate,
                                     std::vector<LabeledExample>* trace) {
    if (n < 1) throw ConfigError("run_recursive: n must be positive");
    if (horizon < 0) throw ConfigError("run_recursive: horizon must be nonnegative");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("run_recursive: alpha must lie in [0, 1]");

    Dataset data;
    std::vector<Hypothesis> history;
    std::vector<RunRecord> records;
    records.reserve(static_cast<std::size_t>(horizon) + 1);
    history.reserve(static_cast<std::size_t>(horizon) + 1);

    for (int t = 0; t <= horizon; ++t) {
        // Round 0 is labeled by nature alone.
        auto batch = t == 0 ? sample_round(dist, f_star, f_star, 0.0, n, rng)
                            : sample_round(dist, history.back(), f_star, alpha, n, rng);
        if (trace) trace->insert(trace->end(), batch.begin(), batch.end());
        data.append_round(batch);

        Hypothesis f = learner.fit(data, history, rng);
        if (!learner.in_class(f)) {
            throw ProtocolError(learner.name() + " returned a hypothesis outside its class: " + f.describe());
        }
        records.push_back({learner.name(), alpha, n, t, true_loss(f, dist, f_star), replicate});
        history.push_back(std::move(f));
    }
    return records;
}

}  // namespace contam
