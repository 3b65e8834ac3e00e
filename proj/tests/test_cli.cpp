#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dpp/parallel.hpp"
#include "dpp/runner.hpp"

namespace fs = std::filesystem;

static std::string g_dpp_bin; // optional path to the CLI binary, from argv

int main(int argc, char** argv) {
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_dpp_bin = argv[argc - 1];
        --argc;
    }
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "dpp_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "config.json";
    std::ofstream os(p, std::ios::binary);
    os << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* kSolveConfig = R"({
  "seed": 42,
  "region": {"dimension": 1, "epsilon": 0.2, "spacing": 0.025,
             "domain": {"shape": "interval", "a": 0.0, "b": 1.0}},
  "operator": {"variant": "fixed_direction", "alpha": 0.5, "beta": 0.5, "lambda": 1.0},
  "boundary": {"preset": "step1d"},
  "running_cost": {"preset": "zero"}
})";

const char* kRegularityConfig = R"({
  "seed": 42,
  "region": {"dimension": 1, "epsilon": 0.2, "spacing": 0.025,
             "domain": {"shape": "interval", "a": 0.0, "b": 1.0}},
  "operator": {"variant": "fixed_direction", "alpha": 0.5, "beta": 0.5, "lambda": 1.0},
  "boundary": {"preset": "step1d"},
  "checks": [
    {"type": "asym_seminorm", "p": 1, "q": 1, "center": [0.5], "radius": 0.25},
    {"type": "second_diff_seminorm", "gamma": 0.5, "center": [0.5], "radius": 0.25},
    {"type": "sandwich", "gamma": 1.0, "R": 1.0, "c2": 1e-6},
    {"type": "taylor_remainder", "gamma": 0.5, "center": [0.5], "radius": 0.25},
    {"type": "dyadic_profile", "x": [0.5], "e": [1.0], "r0": 0.2, "levels": 4,
     "exponent": 1.5}
  ]
})";

const char* kSweepConfig = R"({
  "seed": 7,
  "operator": {"variant": "fixed_direction", "alpha": 0.5, "beta": 0.5},
  "sweep": {"family": "noise1d", "divisor": 16, "epsilons": [0.2, 0.1, 0.05],
            "checks": {"seminorm_radius": 0.25, "c2": 1e-6}},
  "region": {"dimension": 1, "epsilon": 0.2}
})";

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("solve subcommand writes the field and report") {
    const fs::path dir = scratch_dir("solve");
    const fs::path cfg_path = write_config(dir, kSolveConfig);
    const dpp::ExperimentConfig cfg = dpp::load_config(cfg_path.string());
    std::ostringstream err;
    const int rc = dpp::run_command("solve", cfg, (dir / "out").string(), err);
    CHECK(rc == 0);
    const std::string report = slurp(dir / "out" / "solve_report.csv");
    CHECK(report.find("true") != std::string::npos);
    const std::string field = slurp(dir / "out" / "solution.csv");
    CHECK(field.find("# config=") == 0);
    CHECK(count_lines(field) > 40);
}

TEST_CASE("regularity subcommand emits one row per requested check") {
    const fs::path dir = scratch_dir("regularity");
    const fs::path cfg_path = write_config(dir, kRegularityConfig);
    const dpp::ExperimentConfig cfg = dpp::load_config(cfg_path.string());
    std::ostringstream err;
    const int rc = dpp::run_command("regularity", cfg, (dir / "out").string(), err);
    CHECK(rc == 0);
    const std::string csv = slurp(dir / "out" / "regularity.csv");
    // comment + header + 5 check rows: no check silently skipped
    CHECK(count_lines(csv) == 7);
    CHECK(csv.find("asym_seminorm") != std::string::npos);
    CHECK(csv.find("dyadic_profile") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "dyadic_profile_0.csv"));
}

TEST_CASE("jumps subcommand verifies the profile") {
    const fs::path dir = scratch_dir("jumps");
    const fs::path cfg_path = write_config(dir, kSolveConfig);
    const dpp::ExperimentConfig cfg = dpp::load_config(cfg_path.string());
    std::ostringstream err;
    const int rc = dpp::run_command("jumps", cfg, (dir / "out").string(), err);
    CHECK(rc == 0);
    const std::string csv = slurp(dir / "out" / "jumps.csv");
    CHECK(csv.find("violations=0") != std::string::npos);
}

TEST_CASE("figure subcommand is byte-deterministic") {
    const fs::path dir = scratch_dir("figure");
    const fs::path cfg_path = write_config(dir, R"({"figure": {"epsilon": 0.2}})");
    const dpp::ExperimentConfig cfg = dpp::load_config(cfg_path.string());
    std::ostringstream err;
    CHECK(dpp::run_command("figure", cfg, (dir / "a").string(), err) == 0);
    CHECK(dpp::run_command("figure", cfg, (dir / "b").string(), err) == 0);
    for (const char* name : {"fig1.csv", "fig2.csv", "fig1.svg", "fig2.svg"}) {
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
        CHECK(!slurp(dir / "a" / name).empty());
    }
    // 512 samples per curve plus comment and header.
    CHECK(count_lines(slurp(dir / "a" / "fig1.csv")) == 514);
}

TEST_CASE("sweep subcommand is byte-deterministic under a fixed seed") {
    const fs::path dir = scratch_dir("sweep");
    const fs::path cfg_path = write_config(dir, kSweepConfig);
    const dpp::ExperimentConfig cfg = dpp::load_config(cfg_path.string());
    std::ostringstream err;
    CHECK(dpp::run_command("sweep", cfg, (dir / "a").string(), err) == 0);
    CHECK(dpp::run_command("sweep", cfg, (dir / "b").string(), err) == 0);
    const std::string a = slurp(dir / "a" / "sweep.csv");
    CHECK(a == slurp(dir / "b" / "sweep.csv"));
    CHECK(count_lines(a) == 5); // comment + header + 3 rows
}

TEST_CASE("outputs do not depend on the worker thread count") {
    const fs::path dir = scratch_dir("threads");
    const fs::path sweep_cfg = write_config(dir, kSweepConfig);
    const dpp::ExperimentConfig cfg = dpp::load_config(sweep_cfg.string());
    const fs::path reg_dir = scratch_dir("threads_reg");
    const fs::path reg_cfg = write_config(reg_dir, kRegularityConfig);
    const dpp::ExperimentConfig rcfg = dpp::load_config(reg_cfg.string());
    std::ostringstream err;
    dpp::set_thread_count(1);
    CHECK(dpp::run_command("sweep", cfg, (dir / "t1").string(), err) == 0);
    CHECK(dpp::run_command("regularity", rcfg, (reg_dir / "t1").string(), err) == 0);
    dpp::set_thread_count(3);
    CHECK(dpp::run_command("sweep", cfg, (dir / "t3").string(), err) == 0);
    CHECK(dpp::run_command("regularity", rcfg, (reg_dir / "t3").string(), err) == 0);
    dpp::set_thread_count(1);
    CHECK(slurp(dir / "t1" / "sweep.csv") == slurp(dir / "t3" / "sweep.csv"));
    // regularity.csv carries seminorm witnesses, so this also pins the
    // deterministic tie-break of the pair scan.
    CHECK(slurp(reg_dir / "t1" / "regularity.csv") ==
          slurp(reg_dir / "t3" / "regularity.csv"));
}

TEST_CASE("exit code 1: solver non-convergence") {
    const fs::path dir = scratch_dir("nonconv");
    const fs::path cfg_path = write_config(dir, R"({
      "region": {"dimension": 1, "epsilon": 0.2, "spacing": 0.025,
                 "domain": {"shape": "interval", "a": 0.0, "b": 1.0}},
      "operator": {"variant": "fixed_direction", "alpha": 0.5, "beta": 0.5},
      "boundary": {"preset": "step1d"},
      "solver": {"method": "value_iteration", "max_iter": 2}
    })");
    const dpp::ExperimentConfig cfg = dpp::load_config(cfg_path.string());
    std::ostringstream err;
    CHECK(dpp::run_command("solve", cfg, (dir / "out").string(), err) == 1);
    CHECK(err.str().find("did not converge") != std::string::npos);
}

TEST_CASE("exit code 3: violations above the configured allowance") {
    // alpha = 0 predicts jump-free interiors; a zero allowance then flags the
    // smooth O(h) proxies as violations.
    const fs::path dir = scratch_dir("violation");
    const fs::path cfg_path = write_config(dir, R"({
      "region": {"dimension": 1, "epsilon": 0.2, "spacing": 0.003125,
                 "domain": {"shape": "interval", "a": 0.0, "b": 1.0}},
      "operator": {"variant": "fixed_direction", "alpha": 0.0, "beta": 1.0},
      "boundary": {"preset": "step1d"},
      "jumps": {"allowance": 0.0}
    })");
    const dpp::ExperimentConfig cfg = dpp::load_config(cfg_path.string());
    std::ostringstream err;
    CHECK(dpp::run_command("jumps", cfg, (dir / "out").string(), err) == 3);
    CHECK(err.str().find("exceed") != std::string::npos);
}

TEST_CASE("config errors are addressed") {
    const fs::path dir = scratch_dir("badcfg");
    CHECK_THROWS_AS(dpp::load_config((dir / "missing.json").string()), dpp::InvalidConfig);

    const fs::path bad_json = write_config(dir, "{not json");
    CHECK_THROWS_AS(dpp::load_config(bad_json.string()), dpp::InvalidConfig);

    const fs::path bad_field =
        write_config(dir, R"({"operator": {"variant": "nonsense"}})");
    try {
        dpp::load_config(bad_field.string());
        FAIL("expected InvalidConfig");
    } catch (const dpp::InvalidConfig& e) {
        CHECK(std::string(e.what()).find("operator.variant") != std::string::npos);
    }
}

TEST_CASE("binary end-to-end: exit codes and determinism") {
    if (g_dpp_bin.empty()) return; // binary path not provided; library paths covered above
    const fs::path dir = scratch_dir("binary");
    const fs::path cfg_path = write_config(dir, kSolveConfig);

    auto run = [&](const std::string& args) {
        const std::string cmd = g_dpp_bin + " " + args + " 2>/dev/null";
        const int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    };

    CHECK(run("solve --config " + cfg_path.string() + " --out " + (dir / "o1").string()) == 0);
    CHECK(run("jumps --config " + cfg_path.string() + " --out " + (dir / "o2").string()) == 0);
    CHECK(run("solve --config " + (dir / "nope.json").string()) == 2);

    const fs::path bad = write_config(scratch_dir("binary_bad"), R"({"region": 3})");
    CHECK(run("solve --config " + bad.string()) == 2);
}
