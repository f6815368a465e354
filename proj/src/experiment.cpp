#include "contam/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <limits>
#include <optional>
#include <sstream>

#include "contam/errors.hpp"
#include "contam/io.hpp"
#include "contam/learners.hpp"
#include "contam/mean_estimation.hpp"
#include "contam/pac_env.hpp"
#include "contam/parallel.hpp"
#include "contam/random_walk.hpp"
#include "contam/variance_oracle.hpp"

#ifndef CONTAM_VERSION
#define CONTAM_VERSION "0.1.0"
#endif

namespace contam {

using nlohmann::json;

namespace {

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::MeanOracle, "mean-oracle"}, {Command::MeanMc, "mean-mc"}, {Command::PacRun, "pac-run"},
    {Command::PacSweep, "pac-sweep"},     {Command::Walk, "walk"},
};

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    if (const auto last = raw.find_last_not_of(" \t"); last != std::string::npos && raw[last] == ',') {
        out.emplace_back();
    }
    return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw ConfigError("invalid value '" + text + "' for " + key);
    }
    return value;
}

template <typename T>
std::vector<T> parse_number_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    for (const auto& item : split_list(text)) out.push_back(parse_number<T>(key, item));
    return out;
}

bool keep_round(long long t, long long first, long long last, int stride) {
    return t == first || t == last || t % stride == 0;
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

unsigned resolve_threads(unsigned requested) { return requested == 0 ? default_thread_count() : requested; }

LearnerParams learner_params(const ExperimentSpec& spec, int n, double alpha) {
    return spec.constants.empty() ? LearnerParams::defaults(n, alpha)
                                  : LearnerParams::with_constants(spec.constants, n, alpha);
}

void write_mean_oracle(const ExperimentSpec& spec, const std::filesystem::path& path) {
    CsvWriter csv(path, {"alpha", "t", "factor_uniform", "factor_hat", "bound_lo", "bound_hi"});
    for (double alpha : spec.alphas) {
        for (int t = 1; t <= spec.t_max; ++t) {
            if (!keep_round(t, 1, spec.t_max, spec.t_stride)) continue;
            CsvField lo = std::monostate{}, hi = std::monostate{};
            if (t >= 3 && alpha > 0.0 && alpha < 1.0) {
                const SandwichBounds b = gautschi_sandwich(alpha, t);
                lo = b.lower;
                hi = b.upper;
            }
            csv.row({alpha, std::int64_t{t}, var_factor_uniform_closed(alpha, t).value,
                     var_factor_hat_closed(alpha, t).value, lo, hi});
        }
    }
}

void write_mean_mc(const ExperimentSpec& spec, const std::filesystem::path& path) {
    CsvWriter csv(path, {"alpha", "scheme", "t", "trace_var", "stderr", "replicates", "seed"});
    std::uint64_t cell = 0;
    for (double alpha : spec.alphas) {
        for (const auto& tag : spec.schemes) {
            const auto config = ContaminationConfig<double>::scalar(alpha, 0.0, 1.0, spec.t_max);
            const auto scheme = WeightingScheme::from_tag(tag, alpha);
            MonteCarloOptions options;
            options.threads = resolve_threads(spec.threads);
            options.experiment = cell++;
            const auto estimates = monte_carlo_variance(config, scheme, spec.replicates, spec.seed, options);
            for (const auto& e : estimates) {
                if (!keep_round(e.t, 1, spec.t_max, spec.t_stride)) continue;
                csv.row({alpha, tag, std::int64_t{e.t}, e.trace_var, e.std_error, std::int64_t{spec.replicates},
                         static_cast<std::int64_t>(spec.seed)});
            }
        }
    }
}

void write_pac(const ExperimentSpec& spec, const std::filesystem::path& path) {
    CsvWriter csv(path, {"learner", "alpha", "n", "t", "loss", "replicate", "seed"});
    const Hypothesis f_star = hard_target();
    std::uint64_t cell = 0;
    for (const auto& name : spec.learners) {
        for (double alpha : spec.alphas) {
            for (int n : spec.ns) {
                const auto dist = hard_distribution(n);
                const LearnerParams params = learner_params(spec, n, alpha);
                const std::uint64_t experiment = cell++;
                std::vector<std::vector<RunRecord>> runs(static_cast<std::size_t>(spec.replicates));
                parallel_for(runs.size(), resolve_threads(spec.threads), [&](std::size_t r) {
                    RngStream rng = derive_stream(spec.seed, stream_key(experiment, r));
                    auto learner = make_learner(name, params);
                    auto records = run_recursive(dist, f_star, alpha, n, spec.horizon, *learner, rng,
                                                 static_cast<long long>(r));
                    std::erase_if(records, [&](const RunRecord& rec) {
                        return !keep_round(rec.t, 0, spec.horizon, spec.t_stride);
                    });
                    runs[r] = std::move(records);
                });
                for (const auto& records : runs) {
                    for (const auto& rec : records) {
                        csv.row({rec.learner, rec.alpha, std::int64_t{rec.n}, std::int64_t{rec.t}, rec.loss,
                                 std::int64_t{rec.replicate}, static_cast<std::int64_t>(spec.seed)});
                    }
                }
            }
        }
    }
}

void write_walk(const ExperimentSpec& spec, const std::filesystem::path& path) {
    CsvWriter csv(path, {"alpha", "truncation", "replicates", "estimate", "ci_halfwidth"});
    for (std::size_t i = 0; i < spec.alphas.size(); ++i) {
        WalkConfig config{spec.alphas[i], spec.truncation, spec.replicates};
        WalkOptions options{resolve_threads(spec.threads), i};
        const CStarEstimate e = estimate_c_star(config, spec.seed, options);
        csv.row({spec.alphas[i], std::int64_t{spec.truncation}, std::int64_t{spec.replicates}, e.estimate,
                 e.ci_halfwidth});
    }
}

const CsvSchema& schema_for(const std::filesystem::path& file) {
    const std::string stem = file.stem().string();
    if (stem == "mean_oracle") return schema::mean_oracle();
    if (stem == "mean_mc") return schema::mean_mc();
    if (stem == "walk") return schema::walk();
    if (stem == "pac") return schema::pac();
    throw ConfigError("no schema for " + file.string());
}

}  // namespace

std::string command_name(Command c) {
    for (const auto& [cmd, name] : kCommands) {
        if (cmd == c) return name;
    }
    throw std::logic_error("unknown command");
}

Command parse_command(const std::string& name) {
    for (const auto& [cmd, text] : kCommands) {
        if (name == text) return cmd;
    }
    throw ConfigError("unknown command '" + name + "'");
}

std::string output_name(Command command) {
    switch (command) {
        case Command::MeanOracle: return "mean_oracle.csv";
        case Command::MeanMc: return "mean_mc.csv";
        case Command::PacRun:
        case Command::PacSweep: return "pac.csv";
        case Command::Walk: return "walk.csv";
    }
    throw std::logic_error("unknown command");
}

std::string version_string() { return CONTAM_VERSION; }

void ExperimentSpec::validate() const {
    if (alphas.empty()) throw ConfigError("alphas must be non-empty");
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("alphas must lie in [0, 1]");
    }
    if (t_stride < 1) throw ConfigError("t_stride must be positive");
    if (seed > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        throw ConfigError("seed must fit in a signed 64-bit integer");
    }
    if (out.empty()) throw ConfigError("out must name a directory");

    switch (command) {
        case Command::MeanOracle:
            if (t_max < 1) throw ConfigError("t_max must be positive");
            break;
        case Command::MeanMc:
            if (t_max < 1) throw ConfigError("t_max must be positive");
            if (replicates < 2) throw ConfigError("mean-mc needs at least two replicates");
            if (schemes.empty()) throw ConfigError("schemes must be non-empty");
            for (const auto& s : schemes) {
                if (s != "uniform" && s != "simple" && s != "hat") {
                    throw ConfigError("unknown scheme '" + s + "' (uniform, simple, hat)");
                }
            }
            break;
        case Command::PacRun:
        case Command::PacSweep: {
            if (command == Command::PacRun && (learners.size() != 1 || alphas.size() != 1 || ns.size() != 1)) {
                throw ConfigError("pac-run takes exactly one learner, alpha and n; use pac-sweep for grids");
            }
            if (learners.empty() || ns.empty()) throw ConfigError("learners and ns must be non-empty");
            if (horizon < 0) throw ConfigError("horizon must be nonnegative");
            if (replicates < 1) throw ConfigError("replicates must be positive");
            for (int n : ns) {
                if (n < 2) throw ConfigError("every n must be at least 2");
            }
            const auto& known = learner_names();
            for (const auto& l : learners) {
                if (std::find(known.begin(), known.end(), l) == known.end()) {
                    throw ConfigError("unknown learner '" + l + "'");
                }
                if (l == "epoch_pu") {
                    for (double a : alphas) {
                        if (a >= 1.0) throw ConfigError("epoch_pu needs alpha < 1");
                    }
                }
            }
            if (!constants.empty() && !std::filesystem::exists(constants)) {
                throw ConfigError("constants file " + constants.string() + " does not exist");
            }
            break;
        }
        case Command::Walk:
            if (truncation < 1) throw ConfigError("truncation must be positive");
            if (replicates < 1) throw ConfigError("replicates must be positive");
            break;
    }
}

const std::vector<std::string>& spec_keys() {
    static const std::vector<std::string> keys{"alphas",   "t_max",     "t_stride",   "schemes", "ns",
                                               "horizon",  "learners",  "replicates", "truncation",
                                               "seed",     "out",       "threads",    "constants"};
    return keys;
}

ExperimentSpec spec_from_key_values(Command command, const std::map<std::string, std::string>& values) {
    ExperimentSpec spec;
    spec.command = command;
    for (const auto& [key, raw] : values) {
        if (key == "alphas") {
            spec.alphas = parse_number_list<double>(key, raw);
        } else if (key == "t_max") {
            spec.t_max = parse_number<int>(key, raw);
        } else if (key == "t_stride") {
            spec.t_stride = parse_number<int>(key, raw);
        } else if (key == "schemes") {
            spec.schemes = split_list(raw);
        } else if (key == "ns") {
            spec.ns = parse_number_list<int>(key, raw);
        } else if (key == "horizon") {
            spec.horizon = parse_number<int>(key, raw);
        } else if (key == "learners") {
            spec.learners = split_list(raw);
        } else if (key == "replicates") {
            spec.replicates = parse_number<long long>(key, raw);
        } else if (key == "truncation") {
            spec.truncation = parse_number<long long>(key, raw);
        } else if (key == "seed") {
            spec.seed = parse_number<std::uint64_t>(key, raw);
        } else if (key == "out") {
            spec.out = raw;
        } else if (key == "threads") {
            spec.threads = parse_number<unsigned>(key, raw);
        } else if (key == "constants") {
            spec.constants = raw;
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    return spec;
}

json spec_to_json(const ExperimentSpec& spec) {
    json grid{{"alphas", spec.alphas},         {"t_max", spec.t_max},       {"t_stride", spec.t_stride},
              {"schemes", spec.schemes},       {"ns", spec.ns},             {"horizon", spec.horizon},
              {"learners", spec.learners},     {"replicates", spec.replicates},
              {"truncation", spec.truncation}};
    return json{{"command", command_name(spec.command)},
                {"grid", std::move(grid)},
                {"seed", spec.seed},
                {"out", spec.out.string()},
                {"threads", spec.threads},
                {"constants", spec.constants.string()}};
}

ExperimentSpec spec_from_json(const json& meta) {
    try {
        ExperimentSpec spec;
        spec.command = parse_command(meta.at("command").get<std::string>());
        const json& grid = meta.at("grid");
        spec.alphas = grid.at("alphas").get<std::vector<double>>();
        spec.t_max = grid.at("t_max").get<int>();
        spec.t_stride = grid.at("t_stride").get<int>();
        spec.schemes = grid.at("schemes").get<std::vector<std::string>>();
        spec.ns = grid.at("ns").get<std::vector<int>>();
        spec.horizon = grid.at("horizon").get<int>();
        spec.learners = grid.at("learners").get<std::vector<std::string>>();
        spec.replicates = grid.at("replicates").get<long long>();
        spec.truncation = grid.at("truncation").get<long long>();
        spec.seed = meta.at("seed").get<std::uint64_t>();
        spec.out = meta.at("out").get<std::string>();
        spec.threads = meta.at("threads").get<unsigned>();
        spec.constants = meta.at("constants").get<std::string>();
        return spec;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed meta.json: ") + e.what());
    }
}

RunResult run(const ExperimentSpec& spec) {
    spec.validate();
    const auto started = std::chrono::steady_clock::now();
    const std::string started_at = utc_now();

    std::error_code ec;
    std::filesystem::create_directories(spec.out, ec);
    if (ec) throw ConfigError("cannot create output directory " + spec.out.string() + ": " + ec.message());

    RunResult result;
    try {
        const auto csv_path = spec.out / output_name(spec.command);
        result.files.push_back(csv_path);
        switch (spec.command) {
            case Command::MeanOracle: write_mean_oracle(spec, csv_path); break;
            case Command::MeanMc: write_mean_mc(spec, csv_path); break;
            case Command::PacRun:
            case Command::PacSweep: write_pac(spec, csv_path); break;
            case Command::Walk: write_walk(spec, csv_path); break;
        }

        result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        json meta = spec_to_json(spec);
        meta["version"] = version_string();
        meta["started_at"] = started_at;
        meta["elapsed_seconds"] = result.elapsed_seconds;

        const auto meta_path = spec.out / "meta.json";
        result.files.push_back(meta_path);
        std::ofstream out(meta_path, std::ios::binary | std::ios::trunc);
        out << meta.dump(2) << '\n';
        if (!out) throw std::runtime_error("write failed: " + meta_path.string());
    } catch (...) {
        for (const auto& f : result.files) std::filesystem::remove(f, ec);
        throw;
    }
    return result;
}

std::vector<std::string> validate_outputs(const std::vector<std::filesystem::path>& files) {
    std::vector<std::string> problems;
    for (const auto& f : files) {
        if (f.extension() != ".csv") continue;
        for (const auto& p : validate_csv(f, schema_for(f))) problems.push_back(f.filename().string() + ": " + p);
    }
    return problems;
}

}  // namespace contam
