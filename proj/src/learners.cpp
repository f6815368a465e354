#include "contam/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "contam/errors.hpp"
#include "contam/io.hpp"

namespace contam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ThresholdCandidate {
    std::size_t index;  // boundary sits between distinct values index-1 and index
    Orientation orientation;
    double boundary;
    double margin;
    long long errors;
};

// Every (boundary, orientation) pair in tie-break order: boundaries ascending, ascending first.
std::vector<ThresholdCandidate> threshold_candidates(const std::vector<LabelHistogram::Entry>& e) {
    const std::size_t m = e.size();
    std::vector<long long> zeros_below(m + 1, 0), ones_below(m + 1, 0);
    for (std::size_t j = 0; j < m; ++j) {
        zeros_below[j + 1] = zeros_below[j] + e[j].counts[0];
        ones_below[j + 1] = ones_below[j] + e[j].counts[1];
    }
    const long long zeros = zeros_below[m];
    const long long ones = ones_below[m];
    std::vector<ThresholdCandidate> out;
    out.reserve(2 * (m + 1));
    for (std::size_t i = 0; i <= m; ++i) {
        const double boundary = i == 0 ? -kInf : i == m ? kInf : 0.5 * (e[i - 1].x + e[i].x);
        const double margin = (i == 0 || i == m) ? kInf : e[i].x - e[i - 1].x;
        // Ascending predicts 1 at or above index i.
        const long long asc = ones_below[i] + (zeros - zeros_below[i]);
        const long long desc = zeros_below[i] + (ones - ones_below[i]);
        out.push_back({i, Orientation::Ascending, boundary, margin, asc});
        out.push_back({i, Orientation::Descending, boundary, margin, desc});
    }
    return out;
}

LabelHistogram histogram_of(std::span<const LabeledPoint> data) {
    LabelHistogram h;
    h.add(data);
    return h;
}

struct DistinctValues {
    std::vector<double> x;
    std::vector<long long> positives;
    std::vector<long long> unlabeled;
};

DistinctValues merge_inputs(std::span<const double> positives, std::span<const double> unlabeled) {
    std::map<double, std::array<long long, 2>> counts;
    for (double p : positives) ++counts[p][0];
    for (double u : unlabeled) ++counts[u][1];
    DistinctValues out;
    for (const auto& [x, c] : counts) {
        out.x.push_back(x);
        out.positives.push_back(c[0]);
        out.unlabeled.push_back(c[1]);
    }
    return out;
}

double boundary_at(const DistinctValues& v, std::size_t i) {
    const std::size_t m = v.x.size();
    return i == 0 ? -kInf : i == m ? kInf : 0.5 * (v.x[i - 1] + v.x[i]);
}

Hypothesis pu_interval(const DistinctValues& v) {
    const std::size_t m = v.x.size();
    std::vector<long long> pos(m + 1, 0), unl(m + 1, 0);
    for (std::size_t j = 0; j < m; ++j) {
        pos[j + 1] = pos[j] + v.positives[j];
        unl[j + 1] = unl[j] + v.unlabeled[j];
    }
    struct Best {
        long long unlabeled;
        double lo, hi;
        bool co;
    };
    std::optional<Best> best;
    auto better = [](const Best& a, const Best& b) {
        if (a.unlabeled != b.unlabeled) return a.unlabeled < b.unlabeled;
        if (a.lo != b.lo) return a.lo < b.lo;
        if (a.hi != b.hi) return a.hi < b.hi;
        return !a.co && b.co;
    };
    for (std::size_t i = 0; i <= m; ++i) {
        for (std::size_t k = i + 1; k <= m; ++k) {
            const long long pos_inside = pos[k] - pos[i];
            const long long unl_inside = unl[k] - unl[i];
            const double lo = boundary_at(v, i);
            const double hi = boundary_at(v, k);
            // Interval predicts 1 on indices [i, k), the co-interval on the rest.
            if (pos_inside == pos[m]) {
                Best c{unl_inside, lo, hi, false};
                if (!best || better(c, *best)) best = c;
            }
            if (pos_inside == 0) {
                Best c{unl[m] - unl_inside, lo, hi, true};
                if (!best || better(c, *best)) best = c;
            }
        }
    }
    if (!best) throw std::logic_error("pu_learn: no candidate covers every positive");
    const auto lower = Hypothesis::threshold(best->lo, Orientation::Ascending);
    const auto upper = Hypothesis::threshold(best->hi, best->co ? Orientation::Descending : Orientation::Ascending);
    return Hypothesis::xor_pair(lower, upper);
}

Hypothesis pu_anchored(const DistinctValues& v, const Hypothesis& g) {
    const std::size_t m = v.x.size();
    // For every index j: h_j = g_j when f_j = 0 ("off") and 1 - g_j when f_j = 1 ("on").
    std::vector<long long> miss_off(m + 1, 0), miss_on(m + 1, 0), unl_off(m + 1, 0), unl_on(m + 1, 0);
    for (std::size_t j = 0; j < m; ++j) {
        const Label gj = predict(g, v.x[j]);
        const bool has_pos = v.positives[j] > 0;
        miss_off[j + 1] = miss_off[j] + (has_pos && gj == 0);
        miss_on[j + 1] = miss_on[j] + (has_pos && gj == 1);
        unl_off[j + 1] = unl_off[j] + (gj == 1 ? v.unlabeled[j] : 0);
        unl_on[j + 1] = unl_on[j] + (gj == 0 ? v.unlabeled[j] : 0);
    }
    std::optional<std::pair<long long, Hypothesis>> best;
    for (std::size_t i = 0; i <= m; ++i) {
        for (const auto orientation : {Orientation::Ascending, Orientation::Descending}) {
            // Ascending f is on for j >= i; descending for j < i.
            const bool asc = orientation == Orientation::Ascending;
            const long long misses = asc ? miss_off[i] + (miss_on[m] - miss_on[i])
                                         : miss_on[i] + (miss_off[m] - miss_off[i]);
            if (misses != 0) continue;
            const long long cost = asc ? unl_off[i] + (unl_on[m] - unl_on[i]) : unl_on[i] + (unl_off[m] - unl_off[i]);
            if (!best || cost < best->first) {
                best.emplace(cost, Hypothesis::xor_pair(g, Hypothesis::threshold(boundary_at(v, i), orientation)));
            }
        }
    }
    if (!best) throw std::logic_error("pu_learn: no candidate in the anchored class covers every positive");
    return best->second;
}

long long ceil_to_count(double v) { return static_cast<long long>(std::ceil(v - 1e-9)); }

}  // namespace

Hypothesis erm_noisy(const LabelHistogram& data) {
    if (data.empty()) throw DomainError("erm_noisy: empty dataset");
    const auto candidates = threshold_candidates(data.entries());
    const ThresholdCandidate* best = &candidates.front();
    for (const auto& c : candidates) {
        if (c.errors < best->errors) best = &c;
    }
    return Hypothesis::threshold(best->boundary, best->orientation);
}

Hypothesis erm_noisy(std::span<const LabeledPoint> data) { return erm_noisy(histogram_of(data)); }

Hypothesis erm_maxmargin(const LabelHistogram& data) {
    if (data.empty()) throw DomainError("erm_maxmargin: empty dataset");
    const auto candidates = threshold_candidates(data.entries());
    const ThresholdCandidate* best = nullptr;
    for (const auto& c : candidates) {
        if (c.errors != 0) continue;
        if (!best || c.margin > best->margin) best = &c;
    }
    if (!best) return erm_noisy(data);
    return Hypothesis::threshold(best->boundary, best->orientation);
}

Hypothesis erm_maxmargin(std::span<const LabeledPoint> data) { return erm_maxmargin(histogram_of(data)); }

long long count_disagreements(const Hypothesis& h, const LabelHistogram& data) {
    long long errors = 0;
    for (const auto& e : data.entries()) errors += e.counts[predict(h, e.x) == 1 ? 0 : 1];
    return errors;
}

Hypothesis pu_learn(std::span<const double> positives, std::span<const double> unlabeled, const PuClass& cls) {
    if (positives.empty()) throw DomainError("pu_learn: positives must be non-empty");
    const DistinctValues values = merge_inputs(positives, unlabeled);
    if (cls.anchor()) return pu_anchored(values, *cls.anchor());
    return pu_interval(values);
}

void LearnerParams::validate() const {
    if (d_vc < 1 || n < 1) throw ConfigError("learner params: d_vc and n must be positive");
    if (!(c_p > 0.0 && c_u > 0.0 && c_r > 0.0)) throw ConfigError("learner params: constants must be positive");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("learner params: alpha must lie in [0, 1)");
}

LearnerParams LearnerParams::with_constants(const std::filesystem::path& file, int n, double alpha) {
    const auto kv = read_key_values(file);
    LearnerParams p;
    p.n = n;
    p.alpha = alpha;
    auto real = [&](const char* key, double& out) {
        if (auto it = kv.find(key); it != kv.end()) out = std::stod(it->second);
    };
    real("c_p", p.c_p);
    real("c_u", p.c_u);
    real("c_r", p.c_r);
    if (auto it = kv.find("d_vc"); it != kv.end()) p.d_vc = std::stoi(it->second);
    return p;
}

LearnerParams LearnerParams::defaults(int n, double alpha) {
    return with_constants(CONTAM_DEFAULT_CONSTANTS_FILE, n, alpha);
}

EpochSchedule epoch_schedule(const LearnerParams& params, int k) {
    if (k < 1) throw DomainError("epoch_schedule: k must be positive");
    if (params.alpha >= 1.0) throw DomainError("epoch_schedule: alpha = 1 gives a vacuous schedule");
    EpochSchedule s;
    s.epsilon = std::ldexp(1.0, -k);
    s.delta = s.epsilon;
    const double complexity = params.d_vc * std::log(1.0 / s.epsilon) + std::log(2.0 / s.delta);
    s.p = ceil_to_count(params.c_p * complexity / s.epsilon);
    s.u = ceil_to_count(params.c_u * complexity / s.epsilon);
    const double chernoff = 8.0 * std::log(2.0 / s.delta) / ((1.0 - params.alpha) * s.epsilon);
    s.required = ceil_to_count(params.c_r * static_cast<double>(s.p) * chernoff) + s.u;
    s.rounds = (s.required + params.n - 1) / params.n;
    return s;
}

EpochState begin_epoch(const LearnerParams& params, int k, Hypothesis g) {
    const EpochSchedule s = epoch_schedule(params, k);
    EpochState state;
    state.k = k;
    state.g = std::move(g);
    state.epsilon_next = s.epsilon;
    state.rounds_remaining = s.rounds;
    state.p_target = s.p;
    state.u_target = s.u;
    state.delta = s.delta;
    state.buffer.reserve(static_cast<std::size_t>(std::min<long long>(s.required, 1 << 20)));
    return state;
}

EpochState epoch_update(const EpochState& state, const LearnerParams& params) {
    if (state.rounds_remaining != 0) throw ProtocolError("epoch_update called before the epoch finished");
    const std::size_t total = state.buffer.size();
    const std::size_t u = std::min<std::size_t>(total, static_cast<std::size_t>(state.u_target));
    const std::size_t m = total - u;

    std::vector<double> positives;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = state.buffer[i];
        if ((p.y ^ predict(state.g, p.x)) == 1) positives.push_back(p.x);
    }
    std::vector<double> unlabeled;
    unlabeled.reserve(u);
    for (std::size_t i = m; i < total; ++i) unlabeled.push_back(state.buffer[i].x);

    const bool learn = static_cast<long long>(positives.size()) >= state.p_target &&
                       static_cast<long long>(unlabeled.size()) >= state.u_target;
    Hypothesis next = state.g;
    if (learn) {
        const Hypothesis h = pu_learn(positives, unlabeled, PuClass::anchored(state.g));
        next = h ^ state.g;
    }
    EpochState out = begin_epoch(params, state.k + 1, std::move(next));
    out.updated = learn;
    return out;
}

double uniform_mixing_probability(int n, int t) {
    return 1.0 / std::sqrt(static_cast<double>(n) * (static_cast<double>(t) + 1.0));
}

Hypothesis MaxMarginErmLearner::fit(const Dataset& data, std::span<const Hypothesis>, RngStream&) {
    return erm_maxmargin(data.histogram());
}

Hypothesis NoisyErmLearner::fit(const Dataset& data, std::span<const Hypothesis>, RngStream&) {
    return erm_noisy(data.histogram());
}

Hypothesis UniformMixingLearner::fit(const Dataset& data, std::span<const Hypothesis> history, RngStream& rng) {
    if (data.rounds() == 0) throw ProtocolError("uniform_mixing: no data");
    const std::size_t t = data.rounds() - 1;
    if (history.size() != t) throw ProtocolError("uniform_mixing: history length does not match the round");
    for (; processed_rounds_ <= t; ++processed_rounds_) {
        const std::size_t r = processed_rounds_;
        if (r == 0 || history[r - 1].is_uniform_random()) selected_.add(data.round(r));
    }
    const int n = static_cast<int>(data.round(0).size());
    if (rng.bernoulli(uniform_mixing_probability(n, static_cast<int>(t)))) return Hypothesis::uniform_random();
    return erm_noisy(selected_);
}

Hypothesis EpochPuLearner::fit(const Dataset& data, std::span<const Hypothesis> history, RngStream&) {
    if (data.rounds() == 0) throw ProtocolError("epoch_pu: no data");
    const std::size_t t = data.rounds() - 1;
    if (history.size() != t) throw ProtocolError("epoch_pu: history length does not match the round");
    if (t == 0) {
        state_ = begin_epoch(params_, 1, erm_maxmargin(data.histogram()));
        return state_.g;
    }
    const auto batch = data.round(t);
    state_.buffer.insert(state_.buffer.end(), batch.begin(), batch.end());
    if (--state_.rounds_remaining == 0) state_ = epoch_update(state_, params_);
    return state_.g;
}

const std::vector<std::string>& learner_names() {
    static const std::vector<std::string> names{"erm_maxmargin", "erm_noisy_repeated", "uniform_mixing", "epoch_pu"};
    return names;
}

std::unique_ptr<Learner> make_learner(const std::string& name, const LearnerParams& params) {
    if (name == "erm_maxmargin") return std::make_unique<MaxMarginErmLearner>();
    if (name == "erm_noisy_repeated") return std::make_unique<NoisyErmLearner>();
    if (name == "uniform_mixing") return std::make_unique<UniformMixingLearner>();
    if (name == "epoch_pu") return std::make_unique<EpochPuLearner>(params);
    throw ConfigError("unknown learner '" + name + "'");
}

double estimate_alpha(const Environment& env, int n, RngStream& rng) {
    if (n < 1) throw ConfigError("estimate_alpha: n must be positive");
    auto ones = [](const std::vector<LabeledExample>& batch) {
        return std::count_if(batch.begin(), batch.end(), [](const LabeledExample& e) { return e.y == 1; });
    };
    const auto after_zero = sample_round(env.dist, Hypothesis::constant_zero(), env.f_star, env.alpha, n, rng);
    const auto after_one = sample_round(env.dist, Hypothesis::constant_one(), env.f_star, env.alpha, n, rng);
    const double diff = static_cast<double>(ones(after_one) - ones(after_zero)) / n;
    return std::clamp(diff, 0.0, 1.0);
}

}  // namespace contam
