#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpp/parallel.hpp"
#include "dpp/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Elliptic dynamic programming principles on lattices: solve, "
                 "regularity diagnostics, jump analysis, reference figures, sweeps"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 0;

    for (const char* name : {"solve", "regularity", "jumps", "figure", "sweep"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (default from config)");
        sub->add_option("--threads", threads, "worker threads (default DPP_THREADS or 1)");
    }

    CLI11_PARSE(app, argc, argv);

    if (threads <= 0)
        if (const char* env = std::getenv("DPP_THREADS")) threads = std::atoi(env);
    if (threads > 0) dpp::set_thread_count(threads);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const dpp::ExperimentConfig cfg = dpp::load_config(config_path);
        const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
        return dpp::run_command(command, cfg, dir, std::cerr);
    } catch (const dpp::InvalidConfig& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const dpp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
