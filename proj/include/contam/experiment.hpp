#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace contam {

enum class Command { MeanOracle, MeanMc, PacRun, PacSweep, Walk };

std::string command_name(Command c);
Command parse_command(const std::string& name);

/// Everything needed to reproduce one CLI invocation. Keys mirror the CLI flags
/// with '-' replaced by '_'.
struct ExperimentSpec {
    Command command = Command::MeanOracle;
    std::vector<double> alphas{0.5};
    int t_max = 100;                  // mean-oracle / mean-mc
    int t_stride = 1;                 // rows kept for mean-mc and pac commands
    std::vector<std::string> schemes{"uniform", "hat"};
    std::vector<int> ns{10};
    int horizon = 100;
    std::vector<std::string> learners{"erm_maxmargin"};
    long long replicates = 1000;
    long long truncation = 100000;
    std::uint64_t seed = 1;
    std::filesystem::path out = "out";
    unsigned threads = 0;             // 0 selects the logical core count
    std::filesystem::path constants;  // empty selects the checked-in default

    void validate() const;
    bool operator==(const ExperimentSpec&) const = default;
};

/// Keys accepted by from_key_values, in flag order.
const std::vector<std::string>& spec_keys();

/// Builds a spec from raw `key = value` strings; unknown keys and malformed values throw ConfigError.
ExperimentSpec spec_from_key_values(Command command, const std::map<std::string, std::string>& values);

nlohmann::json spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const nlohmann::json& meta);

struct RunResult {
    std::vector<std::filesystem::path> files;  // CSVs followed by meta.json
    double elapsed_seconds = 0.0;
};

/// Runs the experiment and writes its CSV plus meta.json into spec.out. On failure
/// every file written by this call is removed before the exception propagates.
RunResult run(const ExperimentSpec& spec);

/// The CSV file name and schema emitted by a command.
std::string output_name(Command command);

/// Schema problems for every CSV in `files`, prefixed by file name.
std::vector<std::string> validate_outputs(const std::vector<std::filesystem::path>& files);

std::string version_string();

}  // namespace contam
