#pragma once

/// Experiment configuration: a JSON file fully determines a run (seeds
/// included), so identical configs produce byte-identical outputs.

#include <cstdint>
#include <string>
#include <vector>

#include "dpp/regularity.hpp"

namespace dpp {

struct CheckRequest {
    std::string type; // asym_seminorm | second_diff_seminorm | sandwich |
                      // dyadic_profile | taylor_remainder
    double p = 1.0;
    double q = 1.0;
    double gamma = 0.5;
    Vec center{0.0, 0.0};
    double radius = 0.25;
    // sandwich
    double offset = 0.0; // quotient offset h; 0 means epsilon
    Vec direction{1.0, 0.0};
    double scale_R = 1.0;
    double slack_c2 = 0.0;
    // dyadic profile
    Vec x{0.0, 0.0};
    Vec e{1.0, 0.0};
    double r0 = 0.25;
    int levels = 5;
    double exponent = 1.5;
};

struct ExperimentConfig {
    std::uint64_t seed = 12345;
    int dimension = 1;
    DomainShape domain = DomainShape::interval(0.0, 1.0);
    double spacing = 0.025;
    OperatorSpec op;
    BoundaryData boundary;
    std::string boundary_name = "step1d";
    RunningCost cost;
    std::string cost_name = "zero";
    SolveOptions solver;
    std::vector<CheckRequest> checks;

    bool jumps_calibrate = true;
    double jumps_allowance = 0.0;

    double figure_epsilon = 0.2;

    std::vector<double> sweep_epsilons;
    std::string sweep_family = "pucci2d"; // pucci2d | noise1d
    long sweep_divisor = 4;
    SweepChecks sweep_checks;

    std::string out_dir = "out";
    std::string config_hash; // FNV-1a of the raw config bytes
};

/// Parse a config file. Errors carry the offending field path.
ExperimentConfig load_config(const std::string& path);

} // namespace dpp
