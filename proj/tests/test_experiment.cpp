#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "catch_amalgamated.hpp"
#include "contam/errors.hpp"
#include "contam/experiment.hpp"
#include "contam/io.hpp"

using namespace contam;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("contam_exp_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int cli(const std::string& args) {
    const std::string cmd = std::string(CONTAM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("mean-oracle grid cardinality") {
    const auto dir = fresh_dir("oracle");
    REQUIRE(cli("mean-oracle --alphas 0,0.5,1 --t-max 100 --validate --out " + dir.string()) == 0);
    const auto table = read_csv(dir / "mean_oracle.csv");
    CHECK(table.rows.size() == 300);
    CHECK(validate_csv(dir / "mean_oracle.csv", schema::mean_oracle()).empty());
    CHECK(fs::exists(dir / "meta.json"));

    // Bounds are only defined for t >= 3 and alpha strictly inside (0, 1).
    const auto lo = table.column("bound_lo");
    for (const auto& row : table.rows) {
        const bool defined = row[0] == "0.5" && std::stoi(row[1]) >= 3;
        CHECK(row[lo].empty() != defined);
    }
}

TEST_CASE("walk command") {
    const auto dir = fresh_dir("walk");
    REQUIRE(cli("walk --alpha 0.75 --trunc 100000 --reps 100000 --seed 1 --out " + dir.string()) == 0);
    const auto table = read_csv(dir / "walk.csv");
    REQUIRE(table.rows.size() == 1);
    CHECK(std::abs(std::stod(table.rows[0][table.column("estimate")]) - 0.5) < 0.02);
}

TEST_CASE("identical specs give byte-identical csv") {
    const auto a = fresh_dir("det_a");
    const auto b = fresh_dir("det_b");
    const std::string grid =
        "pac-sweep --learners erm_maxmargin,uniform_mixing,epoch_pu --alphas 0.5,0.8 --ns 5,10 --horizon 60 "
        "--reps 20 --t-stride 10 --seed 3 --validate";
    REQUIRE(cli(grid + " --threads 1 --out " + a.string()) == 0);
    REQUIRE(cli(grid + " --threads 3 --out " + b.string()) == 0);
    CHECK(slurp(a / "pac.csv") == slurp(b / "pac.csv"));
    CHECK(read_csv(a / "pac.csv").rows.size() == 3 * 2 * 2 * 20 * 7);

    const auto c = fresh_dir("det_c");
    const auto d = fresh_dir("det_d");
    REQUIRE(cli("mean-mc --alphas 0.25,1 --schemes uniform,hat,simple --t-max 30 --reps 500 --seed 9 --out " +
                c.string()) == 0);
    REQUIRE(cli("mean-mc --alphas 0.25,1 --schemes uniform,hat,simple --t-max 30 --reps 500 --seed 9 --out " +
                d.string()) == 0);
    CHECK(slurp(c / "mean_mc.csv") == slurp(d / "mean_mc.csv"));
    CHECK(validate_csv(c / "mean_mc.csv", schema::mean_mc()).empty());
}

TEST_CASE("meta.json round-trips to the spec") {
    ExperimentSpec spec;
    spec.command = Command::PacSweep;
    spec.alphas = {0.25, 0.8};
    spec.ns = {4, 10};
    spec.learners = {"erm_noisy_repeated", "uniform_mixing"};
    spec.horizon = 12;
    spec.replicates = 3;
    spec.t_stride = 4;
    spec.seed = 77;
    spec.threads = 2;
    spec.out = fresh_dir("meta");
    const auto result = run(spec);
    REQUIRE(result.files.size() == 2);
    CHECK(validate_outputs(result.files).empty());

    std::ifstream in(spec.out / "meta.json");
    const auto meta = nlohmann::json::parse(in);
    CHECK(spec_from_json(meta) == spec);
    for (const char* key : {"command", "grid", "seed", "version", "started_at", "elapsed_seconds"}) {
        CHECK(meta.contains(key));
    }
    CHECK(meta.at("version").get<std::string>() == version_string());
    CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"command", "walk"}}), ConfigError);
}

TEST_CASE("key value specs") {
    const auto spec = spec_from_key_values(Command::Walk, {{"alphas", "0.6, 0.9"},
                                                           {"truncation", "500"},
                                                           {"replicates", "40"},
                                                           {"seed", "12"}});
    CHECK(spec.alphas == std::vector<double>{0.6, 0.9});
    CHECK(spec.truncation == 500);
    CHECK(spec.replicates == 40);
    CHECK(spec.seed == 12);
    CHECK_THROWS_AS(spec_from_key_values(Command::Walk, {{"alpha_list", "0.5"}}), ConfigError);
    CHECK_THROWS_AS(spec_from_key_values(Command::Walk, {{"replicates", "ten"}}), ConfigError);
    CHECK_THROWS_AS(spec_from_key_values(Command::Walk, {{"alphas", "0.5,"}}), ConfigError);
    CHECK(parse_command("pac-run") == Command::PacRun);
    CHECK_THROWS_AS(parse_command("train"), ConfigError);
}

TEST_CASE("config file with flag overrides") {
    const auto dir = fresh_dir("config");
    fs::create_directories(dir);
    const auto conf = dir / "walk.conf";
    std::ofstream(conf) << "alphas = 0.6\ntruncation = 1000\nreplicates = 200\nseed = 5\nout = "
                        << (dir / "from_file").string() << "\n";
    REQUIRE(cli("walk --config " + conf.string() + " --reps 300") == 0);
    const auto table = read_csv(dir / "from_file" / "walk.csv");
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0][table.column("replicates")] == "300");
    CHECK(table.rows[0][table.column("truncation")] == "1000");
}

TEST_CASE("invalid specs are usage errors") {
    const auto dir = fresh_dir("invalid");
    CHECK(cli("mean-oracle --alphas 1.5 --out " + dir.string()) == 2);
    CHECK(cli("mean-oracle --alphas '' --out " + dir.string()) == 2);
    CHECK(cli("mean-mc --schemes median --out " + dir.string()) == 2);
    CHECK(cli("pac-sweep --learners perceptron --out " + dir.string()) == 2);
    CHECK(cli("pac-run --learners erm_maxmargin,epoch_pu --out " + dir.string()) == 2);
    CHECK(cli("pac-run --learners epoch_pu --alphas 1 --out " + dir.string()) == 2);
    CHECK(cli("pac-run --ns 1 --out " + dir.string()) == 2);
    CHECK(cli("walk --trunc 0 --out " + dir.string()) == 2);
    CHECK(cli("walk --reps x --out " + dir.string()) == 2);
    CHECK(cli("bogus") != 0);
    CHECK_FALSE(fs::exists(dir / "walk.csv"));

    ExperimentSpec empty;
    empty.alphas.clear();
    CHECK_THROWS_AS(empty.validate(), ConfigError);
}

TEST_CASE("failed runs leave no partial files") {
    const auto dir = fresh_dir("partial");
    fs::create_directories(dir);
    const auto bad_constants = dir / "bad.conf";
    std::ofstream(bad_constants) << "c_p = not-a-number\n";
    const auto out = dir / "run";
    CHECK(cli("pac-run --learners epoch_pu --alphas 0.5 --horizon 5 --reps 2 --constants " + bad_constants.string() +
              " --out " + out.string()) == 1);
    CHECK_FALSE(fs::exists(out / "pac.csv"));
    CHECK_FALSE(fs::exists(out / "meta.json"));
}
