#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "contam/errors.hpp"
#include "contam/experiment.hpp"
#include "contam/io.hpp"

namespace {

struct FlagDef {
    const char* key;
    const char* names;
    const char* help;
};

constexpr FlagDef kFlags[] = {
    {"alphas", "--alphas,--alpha", "Comma-separated contamination rates in [0,1]"},
    {"t_max", "--t-max", "Largest t for the variance commands"},
    {"t_stride", "--t-stride", "Keep every k-th t (first and last are always kept)"},
    {"schemes", "--schemes", "Weighting schemes for mean-mc: uniform, simple, hat"},
    {"ns", "--ns,--n", "Comma-separated pool sizes"},
    {"horizon", "--horizon", "Last round of the recursive loop"},
    {"learners", "--learners,--learner", "erm_maxmargin, erm_noisy_repeated, uniform_mixing, epoch_pu"},
    {"replicates", "--replicates,--reps", "Monte Carlo replicates"},
    {"truncation", "--truncation,--trunc", "Walk steps before declaring it stays positive"},
    {"seed", "--seed", "Base seed"},
    {"out", "--out", "Output directory"},
    {"threads", "--threads", "Worker threads, 0 = logical core count"},
    {"constants", "--constants", "Learner constants file (key = value)"},
};

struct Subcommand {
    const char* name;
    const char* help;
    std::vector<std::string> keys;
};

const std::vector<Subcommand>& subcommands() {
    static const std::vector<Subcommand> s{
        {"mean-oracle", "Closed-form variance factors and bounds",
         {"alphas", "t_max", "t_stride", "out"}},
        {"mean-mc", "Monte Carlo variance of the contaminated mean estimator",
         {"alphas", "t_max", "t_stride", "schemes", "replicates", "seed", "out", "threads"}},
        {"pac-run", "One learner on the hard instance, every round",
         {"alphas", "ns", "horizon", "learners", "replicates", "t_stride", "seed", "out", "threads", "constants"}},
        {"pac-sweep", "Grid of learners, alphas and pool sizes on the hard instance",
         {"alphas", "ns", "horizon", "learners", "replicates", "t_stride", "seed", "out", "threads", "constants"}},
        {"walk", "Probability that the biased walk stays positive",
         {"alphas", "truncation", "replicates", "seed", "out", "threads"}},
    };
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulations of learning from recursively contaminated data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", contam::version_string());

    std::string config_file;
    bool validate = false;
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, std::map<std::string, CLI::Option*>> options;
    std::map<std::string, CLI::App*> apps;

    for (const auto& sub : subcommands()) {
        CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
        apps[sub.name] = cmd;
        cmd->add_option("--config", config_file, "key = value file; flags override it")->check(CLI::ExistingFile);
        cmd->add_flag("--validate", validate, "Check every CSV against its schema after the run");
        for (const auto& def : kFlags) {
            if (std::find(sub.keys.begin(), sub.keys.end(), def.key) == sub.keys.end()) continue;
            options[sub.name][def.key] = cmd->add_option(def.names, raw[sub.name][def.key], def.help);
        }
    }

    CLI11_PARSE(app, argc, argv);

    std::string chosen;
    for (const auto& [name, cmd] : apps) {
        if (cmd->parsed()) chosen = name;
    }

    contam::ExperimentSpec spec;
    try {
        std::map<std::string, std::string> values;
        if (!config_file.empty()) values = contam::read_key_values(config_file);
        for (const auto& [key, opt] : options[chosen]) {
            if (opt->count() > 0) values[key] = raw[chosen][key];
        }
        spec = contam::spec_from_key_values(contam::parse_command(chosen), values);
        spec.validate();
    } catch (const contam::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << apps[chosen]->help();
        return 2;
    }

    try {
        const auto result = contam::run(spec);
        for (const auto& f : result.files) std::cout << f.string() << '\n';
        if (validate) {
            const auto problems = contam::validate_outputs(result.files);
            for (const auto& p : problems) std::cerr << "schema: " << p << '\n';
            if (!problems.empty()) return 1;
        }
    } catch (const contam::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
